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

// Comparison oracles and the batching executor that turns groups of
// independent comparisons into counted inference calls.

#ifndef PRPSORT_ORACLE_HPP_
#define PRPSORT_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "prpsort/core.hpp"

namespace prpsort {

/// A strict pairwise judge. Implementations must answer deterministically for
/// a fixed configuration and seed.
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual Preference compare(const ComparisonRequest& req) = 0;

  /// Resolves all requests as one logical inference call. The default issues
  /// them one at a time; backends with native batching override it.
  virtual std::vector<Preference> compare_batch(std::span<const ComparisonRequest> reqs);

  /// Answer available without an inference (memo cache), if any.
  virtual std::optional<Preference> lookup(const ComparisonRequest&) const { return std::nullopt; }
};

/// Non-owning forwarding wrapper; `oracle` must outlive the result.
std::unique_ptr<Oracle> borrow(Oracle& oracle);

using ScoreMap = std::unordered_map<DocId, double, DocIdHash>;

/// Larger score wins; equal scores go to the lexicographically smaller id.
class ScoreOracle final : public Oracle {
 public:
  explicit ScoreOracle(ScoreMap scores);

  Preference compare(const ComparisonRequest& req) override;

  const ScoreMap& scores() const noexcept { return scores_; }

 private:
  double score_of(const DocId& id) const;

  ScoreMap scores_;
};

enum class NoiseMode {
  /// Flip decision keyed on (seed, canonical pair): a pair always answers the
  /// same way within a run.
  kPerPair,
  /// Flip decision re-rolled on every query from a seeded stream.
  kPerEvent,
};

class NoisyOracle final : public Oracle {
 public:
  NoisyOracle(std::unique_ptr<Oracle> base, double flip_probability, std::uint64_t seed,
              NoiseMode mode = NoiseMode::kPerPair);

  Preference compare(const ComparisonRequest& req) override;
  std::vector<Preference> compare_batch(std::span<const ComparisonRequest> reqs) override;

 private:
  bool should_flip(const ComparisonRequest& req);

  std::unique_ptr<Oracle> base_;
  double flip_probability_;
  std::uint64_t seed_;
  NoiseMode mode_;
  std::mt19937_64 events_;
};

/// Memoizing layer keyed by the unordered pair. Outcomes are stored in
/// canonical (lo, hi) orientation and re-oriented on the way out.
class MemoizedOracle final : public Oracle {
 public:
  explicit MemoizedOracle(std::unique_ptr<Oracle> base);

  /// Returns the outcome and whether it came from the cache. The cache is
  /// left untouched if the base oracle throws.
  std::pair<Preference, bool> compare_tracked(const ComparisonRequest& req);

  Preference compare(const ComparisonRequest& req) override { return compare_tracked(req).first; }
  std::vector<Preference> compare_batch(std::span<const ComparisonRequest> reqs) override;
  std::optional<Preference> lookup(const ComparisonRequest& req) const override;

  std::size_t size() const noexcept { return cache_.size(); }
  void clear() { cache_.clear(); }

 private:
  std::unique_ptr<Oracle> base_;
  std::unordered_map<PairKey, Preference, PairKeyHash> cache_;
};

/// One executed comparison, as seen by the executor.
struct TraceEntry {
  ComparisonRequest request;
  Preference outcome;
  bool cache_hit;
};

/// Groups independent comparisons into inference calls of at most
/// `batch_size` comparisons and keeps the cost ledger for one run.
class BatchExecutor {
 public:
  explicit BatchExecutor(std::size_t batch_size = 1);

  /// Answers every request in order. All requests must be independent of
  /// each other's outcomes. Cache hits are free; the m remaining requests
  /// cost ceil(m / batch_size) calls and one batch group.
  std::vector<Preference> submit_group(Oracle& oracle, std::span<const ComparisonRequest> group);

  Preference submit_one(Oracle& oracle, const ComparisonRequest& req);

  std::size_t batch_size() const noexcept { return batch_size_; }
  const CostLedger& ledger() const noexcept { return ledger_; }

  /// Every answered comparison is appended to `sink` while it is set.
  void set_trace(std::vector<TraceEntry>* sink) noexcept { trace_ = sink; }

 private:
  std::size_t batch_size_;
  CostLedger ledger_;
  std::vector<TraceEntry>* trace_ = nullptr;
};

}  // namespace prpsort

#endif  // PRPSORT_ORACLE_HPP_
