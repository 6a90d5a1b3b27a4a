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

#include "prpsort/algorithms.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <utility>

#include "prpsort/log.hpp"
#include "prpsort/seed.hpp"

namespace prpsort {

void validate(const AlgoConfig& config) {
  if (config.k == 0) throw Error(ErrorCode::kInvalidConfig, "k must be >= 1");
  if (config.batch_size == 0) {
    throw Error(ErrorCode::kInvalidConfig, "batch_size must be >= 1");
  }
  const std::string name(to_string(config.algorithm));
  if (config.algorithm != Algorithm::kQuicksort && config.batch_size > 1) {
    throw Error(ErrorCode::kInvalidConfig, name + " cannot batch comparisons");
  }
  if (config.algorithm != Algorithm::kBubblesort && config.use_cache) {
    throw Error(ErrorCode::kInvalidConfig, name + " does not support caching");
  }
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kHeapsort:
      return "heapsort";
    case Algorithm::kBubblesort:
      return "bubblesort";
    case Algorithm::kQuicksort:
      return "quicksort";
  }
  return "unknown";
}

std::string_view to_string(PivotStrategy::Kind kind) {
  switch (kind) {
    case PivotStrategy::Kind::kFirst:
      return "first";
    case PivotStrategy::Kind::kMiddle:
      return "middle";
    case PivotStrategy::Kind::kRandom:
      return "random";
    case PivotStrategy::Kind::kMedianOfThree:
      return "median3";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "heapsort") return Algorithm::kHeapsort;
  if (name == "bubblesort") return Algorithm::kBubblesort;
  if (name == "quicksort") return Algorithm::kQuicksort;
  throw Error(ErrorCode::kInvalidConfig, "unknown algorithm '" + std::string(name) + "'");
}

PivotStrategy::Kind parse_pivot(std::string_view name) {
  if (name == "first" || name == "original" || name == "hoare") {
    return PivotStrategy::Kind::kFirst;
  }
  if (name == "middle") return PivotStrategy::Kind::kMiddle;
  if (name == "random") return PivotStrategy::Kind::kRandom;
  if (name == "median3" || name == "median-of-three" || name == "median_of_three") {
    return PivotStrategy::Kind::kMedianOfThree;
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown pivot strategy '" + std::string(name) + "'");
}

std::string label(const AlgoConfig& config) {
  switch (config.algorithm) {
    case Algorithm::kHeapsort:
      return "heapsort";
    case Algorithm::kBubblesort:
      return config.use_cache ? "bubblesort/cached" : "bubblesort/classic";
    case Algorithm::kQuicksort: {
      std::string out = "quicksort/";
      out += to_string(config.pivot.kind);
      out += "/b" + std::to_string(config.batch_size);
      if (!config.partial) out += "/full";
      return out;
    }
  }
  return "unknown";
}

namespace {

void require_unbatched(const BatchExecutor& executor, std::string_view algorithm) {
  if (executor.batch_size() != 1) {
    throw Error(ErrorCode::kInvalidConfig, std::string(algorithm) + " cannot batch comparisons");
  }
}

void require_input(std::span<const DocId> items, std::size_t k) {
  if (items.empty()) throw Error(ErrorCode::kInvalidConfig, "empty candidate list");
  if (k == 0) throw Error(ErrorCode::kInvalidConfig, "k must be >= 1");
  check_unique_ids(items);
}

}  // namespace

Ranking heapsort_topk(std::span<const DocId> items, std::size_t k, Oracle& oracle,
                      BatchExecutor& executor) {
  require_unbatched(executor, "heapsort");
  require_input(items, k);
  k = std::min(k, items.size());

  std::vector<DocId> heap(items.begin(), items.end());
  // True when heap[a] is preferred over heap[b].
  auto beats = [&](std::size_t a, std::size_t b) {
    return executor.submit_one(oracle, {heap[a], heap[b]}) == Preference::kFirst;
  };
  auto sift_down = [&](std::size_t node, std::size_t size) {
    for (;;) {
      const std::size_t left = 2 * node + 1;
      if (left >= size) return;
      std::size_t best = left;
      const std::size_t right = left + 1;
      if (right < size && !beats(left, right)) best = right;
      if (!beats(best, node)) return;
      std::swap(heap[node], heap[best]);
      node = best;
    }
  };

  std::size_t size = heap.size();
  for (std::size_t i = size / 2; i > 0; --i) sift_down(i - 1, size);

  Ranking out;
  out.ordered.reserve(k);
  for (std::size_t extracted = 0; extracted < k; ++extracted) {
    out.ordered.push_back(heap[0]);
    --size;
    // The last extraction needs no repair.
    if (extracted + 1 < k && size > 0) {
      heap[0] = std::move(heap[size]);
      sift_down(0, size);
    }
  }
  return out;
}

Ranking bubblesort_topk(std::span<const DocId> items, std::size_t k, Oracle& oracle,
                        BatchExecutor& executor, bool use_cache) {
  require_unbatched(executor, "bubblesort");
  require_input(items, k);
  k = std::min(k, items.size());

  std::optional<MemoizedOracle> memo;
  Oracle* judge = &oracle;
  if (use_cache) {
    memo.emplace(borrow(oracle));
    judge = &*memo;
  }

  std::vector<DocId> list(items.begin(), items.end());
  const std::size_t n = list.size();
  for (std::size_t pass = 0; pass < k; ++pass) {
    bool swapped = false;
    for (std::size_t j = n - 1; j > pass; --j) {
      if (executor.submit_one(*judge, {list[j - 1], list[j]}) == Preference::kSecond) {
        std::swap(list[j - 1], list[j]);
        swapped = true;
      }
    }
    if (!swapped) break;
  }
  list.resize(k);
  return Ranking{std::move(list)};
}

PivotChoice choose_pivot(std::span<const DocId> positions, Segment segment, PivotStrategy strategy,
                         std::mt19937_64& rng, BatchExecutor& executor, Oracle& oracle) {
  if (segment.size() == 0 || segment.hi > positions.size()) {
    throw Error(ErrorCode::kInvalidConfig, "pivot selection on an invalid segment");
  }
  const std::size_t len = segment.size();
  const std::size_t middle = segment.lo + (len - 1) / 2;
  if (len == 1) return {segment.lo, {}};

  switch (strategy.kind) {
    case PivotStrategy::Kind::kFirst:
      return {segment.lo, {}};
    case PivotStrategy::Kind::kMiddle:
      return {middle, {}};
    case PivotStrategy::Kind::kRandom:
      return {segment.lo + static_cast<std::size_t>(draw_index(rng, len)), {}};
    case PivotStrategy::Kind::kMedianOfThree:
      break;
  }
  if (len < 3) return {segment.lo, {}};

  const std::array<std::size_t, 3> idx = {segment.lo, middle, segment.hi - 1};
  const std::array<std::pair<std::size_t, std::size_t>, 3> matches = {{{0, 1}, {0, 2}, {1, 2}}};
  std::vector<ComparisonRequest> group;
  group.reserve(3);
  for (auto [a, b] : matches) group.push_back({positions[idx[a]], positions[idx[b]]});
  const std::vector<Preference> outcome = executor.submit_group(oracle, group);

  std::array<std::size_t, 3> winner{};
  std::array<int, 3> wins = {0, 0, 0};
  for (std::size_t m = 0; m < 3; ++m) {
    winner[m] = outcome[m] == Preference::kFirst ? matches[m].first : matches[m].second;
    ++wins[winner[m]];
  }
  // A transitive triple has win counts {2, 1, 0}; a cycle gives {1, 1, 1}.
  std::size_t chosen = 1;
  if (!(wins[0] == 1 && wins[1] == 1 && wins[2] == 1)) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (wins[i] == 1) chosen = i;
    }
  }

  PivotChoice choice{idx[chosen], {}};
  for (std::size_t m = 0; m < 3; ++m) {
    const auto [a, b] = matches[m];
    if (a != chosen && b != chosen) continue;
    const std::size_t other = a == chosen ? b : a;
    choice.known.push_back({idx[other], winner[m] == other});
  }
  return choice;
}

std::size_t select_pivot(std::span<const DocId> positions, Segment segment, PivotStrategy strategy,
                         std::mt19937_64& rng, BatchExecutor& executor, Oracle& oracle) {
  return choose_pivot(positions, segment, strategy, rng, executor, oracle).position;
}

std::size_t batch_partition(std::span<DocId> positions, Segment segment, std::size_t pivot,
                            BatchExecutor& executor, Oracle& oracle,
                            std::span<const KnownOutcome> known) {
  if (segment.size() < 2 || segment.hi > positions.size() || pivot < segment.lo ||
      pivot >= segment.hi) {
    throw Error(ErrorCode::kInvalidConfig, "partition on an invalid segment");
  }
  auto known_at = [&](std::size_t i) -> const KnownOutcome* {
    for (const auto& k : known) {
      if (k.position == i) return &k;
    }
    return nullptr;
  };

  std::vector<ComparisonRequest> group;
  group.reserve(segment.size() - 1);
  for (std::size_t i = segment.lo; i < segment.hi; ++i) {
    if (i != pivot && known_at(i) == nullptr) group.push_back({positions[i], positions[pivot]});
  }
  const std::vector<Preference> outcome = executor.submit_group(oracle, group);

  std::vector<DocId> left;
  std::vector<DocId> right;
  std::size_t asked = 0;
  for (std::size_t i = segment.lo; i < segment.hi; ++i) {
    if (i == pivot) continue;
    bool wins;
    if (const KnownOutcome* k = known_at(i)) {
      wins = k->beats_pivot;
    } else {
      wins = outcome[asked++] == Preference::kFirst;
    }
    (wins ? left : right).push_back(positions[i]);
  }
  DocId pivot_id = positions[pivot];
  std::size_t at = segment.lo;
  for (auto& id : left) positions[at++] = std::move(id);
  const std::size_t pivot_at = at;
  positions[at++] = std::move(pivot_id);
  for (auto& id : right) positions[at++] = std::move(id);
  return pivot_at;
}

Ranking quicksort_topk(std::span<const DocId> items, std::size_t k, Oracle& oracle,
                       BatchExecutor& executor, PivotStrategy pivot, bool partial) {
  require_input(items, k);
  k = std::min(k, items.size());

  std::vector<DocId> positions(items.begin(), items.end());
  std::mt19937_64 rng(pivot.seed);
  // Depth-first, left segment first, so segments resolve in position order.
  std::vector<Segment> work = {{0, positions.size()}};
  while (!work.empty()) {
    const Segment seg = work.back();
    work.pop_back();
    if (seg.size() < 2) continue;
    if (partial && seg.lo >= k) continue;

    const PivotChoice choice = choose_pivot(positions, seg, pivot, rng, executor, oracle);
    const std::size_t mid =
        batch_partition(positions, seg, choice.position, executor, oracle, choice.known);
    work.push_back({mid + 1, seg.hi});
    work.push_back({seg.lo, mid});
  }
  positions.resize(k);
  return Ranking{std::move(positions)};
}

RunResult run_algorithm(std::span<const DocId> items, const AlgoConfig& config, Oracle& oracle,
                        std::vector<TraceEntry>* trace) {
  validate(config);
  require_input(items, config.k);
  std::size_t k = config.k;
  if (k > items.size()) {
    warn("k=" + std::to_string(k) + " exceeds " + std::to_string(items.size()) +
         " candidates; clamping");
    k = items.size();
  }

  BatchExecutor executor(config.batch_size);
  executor.set_trace(trace);
  RunResult result;
  switch (config.algorithm) {
    case Algorithm::kHeapsort:
      result.ranking = heapsort_topk(items, k, oracle, executor);
      break;
    case Algorithm::kBubblesort:
      result.ranking = bubblesort_topk(items, k, oracle, executor, config.use_cache);
      break;
    case Algorithm::kQuicksort:
      result.ranking = quicksort_topk(items, k, oracle, executor, config.pivot, config.partial);
      break;
  }
  result.ledger = executor.ledger();
  return result;
}

}  // namespace prpsort
