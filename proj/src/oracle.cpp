// Copyright 2026 The prp-sort Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "prpsort/oracle.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "prpsort/seed.hpp"

namespace prpsort {

std::vector<Preference> Oracle::compare_batch(std::span<const ComparisonRequest> reqs) {
  std::vector<Preference> out;
  out.reserve(reqs.size());
  for (const auto& req : reqs) out.push_back(compare(req));
  return out;
}

namespace {

class BorrowedOracle final : public Oracle {
 public:
  explicit BorrowedOracle(Oracle& target) : target_(target) {}

  Preference compare(const ComparisonRequest& req) override { return target_.compare(req); }
  std::vector<Preference> compare_batch(std::span<const ComparisonRequest> reqs) override {
    return target_.compare_batch(reqs);
  }
  std::optional<Preference> lookup(const ComparisonRequest& req) const override {
    return target_.lookup(req);
  }

 private:
  Oracle& target_;
};

}  // namespace

std::unique_ptr<Oracle> borrow(Oracle& oracle) { return std::make_unique<BorrowedOracle>(oracle); }

// --- ScoreOracle -----------------------------------------------------------

ScoreOracle::ScoreOracle(ScoreMap scores) : scores_(std::move(scores)) {}

double ScoreOracle::score_of(const DocId& id) const {
  auto it = scores_.find(id);
  if (it == scores_.end()) {
    throw Error(ErrorCode::kUnknownDoc, "no score for document " + id.str());
  }
  return it->second;
}

Preference ScoreOracle::compare(const ComparisonRequest& req) {
  canonical_pair(req);  // rejects identical ids
  const double a = score_of(req.first);
  const double b = score_of(req.second);
  if (a > b) return Preference::kFirst;
  if (b > a) return Preference::kSecond;
  return req.first < req.second ? Preference::kFirst : Preference::kSecond;
}

// --- NoisyOracle -----------------------------------------------------------

NoisyOracle::NoisyOracle(std::unique_ptr<Oracle> base, double flip_probability, std::uint64_t seed,
                         NoiseMode mode)
    : base_(std::move(base)),
      flip_probability_(flip_probability),
      seed_(seed),
      mode_(mode),
      events_(seed) {
  if (!base_) throw Error(ErrorCode::kInvalidConfig, "noisy oracle needs a base");
  if (!(flip_probability >= 0.0 && flip_probability <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "flip_probability must lie in [0, 1], got " + std::to_string(flip_probability));
  }
}

bool NoisyOracle::should_flip(const ComparisonRequest& req) {
  if (mode_ == NoiseMode::kPerEvent) {
    return to_unit(events_()) < flip_probability_;
  }
  const PairKey key = canonical_pair(req);
  std::uint64_t h = fnv1a(key.lo.str());
  h = fnv1a("\x1f", h);
  h = fnv1a(key.hi.str(), h);
  return to_unit(mix_seed(seed_, h)) < flip_probability_;
}

Preference NoisyOracle::compare(const ComparisonRequest& req) {
  const Preference base = base_->compare(req);
  return should_flip(req) ? flip(base) : base;
}

std::vector<Preference> NoisyOracle::compare_batch(std::span<const ComparisonRequest> reqs) {
  std::vector<Preference> out = base_->compare_batch(reqs);
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    if (should_flip(reqs[i])) out[i] = flip(out[i]);
  }
  return out;
}

// --- MemoizedOracle --------------------------------------------------------

MemoizedOracle::MemoizedOracle(std::unique_ptr<Oracle> base) : base_(std::move(base)) {
  if (!base_) throw Error(ErrorCode::kInvalidConfig, "memoized oracle needs a base");
}

std::optional<Preference> MemoizedOracle::lookup(const ComparisonRequest& req) const {
  const PairKey key = canonical_pair(req);
  auto it = cache_.find(key);
  if (it == cache_.end()) return std::nullopt;
  return orient(it->second, key.flipped);
}

std::pair<Preference, bool> MemoizedOracle::compare_tracked(const ComparisonRequest& req) {
  const PairKey key = canonical_pair(req);
  if (auto it = cache_.find(key); it != cache_.end()) {
    return {orient(it->second, key.flipped), true};
  }
  const Preference result = base_->compare(req);
  cache_.emplace(key, orient(result, key.flipped));
  return {result, false};
}

std::vector<Preference> MemoizedOracle::compare_batch(std::span<const ComparisonRequest> reqs) {
  std::vector<Preference> out(reqs.size());
  std::vector<PairKey> keys;
  keys.reserve(reqs.size());
  // Position in `ask` answering each request, or npos for cache hits.
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> slot(reqs.size(), npos);
  std::vector<ComparisonRequest> ask;
  std::unordered_map<PairKey, std::size_t, PairKeyHash> pending;

  for (std::size_t i = 0; i < reqs.size(); ++i) {
    keys.push_back(canonical_pair(reqs[i]));
    const PairKey& key = keys.back();
    if (auto it = cache_.find(key); it != cache_.end()) {
      out[i] = orient(it->second, key.flipped);
    } else if (auto p = pending.find(key); p != pending.end()) {
      slot[i] = p->second;
    } else {
      slot[i] = ask.size();
      pending.emplace(key, ask.size());
      ask.push_back(reqs[i]);
    }
  }
  if (ask.empty()) return out;

  const std::vector<Preference> answers = base_->compare_batch(ask);
  if (answers.size() != ask.size()) {
    throw Error(ErrorCode::kBackendFailure, "oracle returned a short batch");
  }
  std::vector<Preference> canonical(ask.size());
  for (std::size_t j = 0; j < ask.size(); ++j) {
    const PairKey key = canonical_pair(ask[j]);
    canonical[j] = orient(answers[j], key.flipped);
    cache_.emplace(key, canonical[j]);
  }
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    if (slot[i] != npos) out[i] = orient(canonical[slot[i]], keys[i].flipped);
  }
  return out;
}

// --- BatchExecutor ---------------------------------------------------------

BatchExecutor::BatchExecutor(std::size_t batch_size) : batch_size_(batch_size) {
  if (batch_size_ == 0) {
    throw Error(ErrorCode::kInvalidConfig, "batch_size must be >= 1");
  }
}

std::vector<Preference> BatchExecutor::submit_group(Oracle& oracle,
                                                    std::span<const ComparisonRequest> group) {
  std::vector<Preference> out(group.size());
  if (group.empty()) return out;

  std::vector<bool> hit(group.size(), false);
  std::vector<std::size_t> misses;
  for (std::size_t i = 0; i < group.size(); ++i) {
    canonical_pair(group[i]);
    if (auto cached = oracle.lookup(group[i])) {
      out[i] = *cached;
      hit[i] = true;
    } else {
      misses.push_back(i);
    }
  }
  const std::uint64_t hits = group.size() - misses.size();
  ledger_.comparisons += hits;
  ledger_.cache_hits += hits;

  std::vector<ComparisonRequest> chunk;
  for (std::size_t start = 0; start < misses.size(); start += batch_size_) {
    const std::size_t end = std::min(misses.size(), start + batch_size_);
    chunk.clear();
    for (std::size_t j = start; j < end; ++j) chunk.push_back(group[misses[j]]);

    const std::vector<Preference> answers = oracle.compare_batch(chunk);
    if (answers.size() != chunk.size()) {
      throw Error(ErrorCode::kBackendFailure, "oracle returned a short batch");
    }
    for (std::size_t j = start; j < end; ++j) out[misses[j]] = answers[j - start];

    ledger_.inference_calls += 1;
    ledger_.comparisons += chunk.size();
    if (start == 0) ledger_.batch_groups += 1;
  }

  if (trace_ != nullptr) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      trace_->push_back(TraceEntry{group[i], out[i], hit[i]});
    }
  }
  return out;
}

Preference BatchExecutor::submit_one(Oracle& oracle, const ComparisonRequest& req) {
  return submit_group(oracle, std::span<const ComparisonRequest>(&req, 1)).front();
}

}  // namespace prpsort
