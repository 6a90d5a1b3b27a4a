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

// Instrumented top-k ranking algorithms. Every oracle query goes through a
// BatchExecutor so that comparisons, inference calls and cache hits are
// accounted for uniformly.
//
//            batching  caching  top-k
// heapsort      -         -       k extractions
// bubblesort    -         x       k passes
// quicksort     x         -       partial recursion

#ifndef PRPSORT_ALGORITHMS_HPP_
#define PRPSORT_ALGORITHMS_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prpsort/core.hpp"
#include "prpsort/oracle.hpp"

namespace prpsort {

enum class Algorithm { kHeapsort, kBubblesort, kQuicksort };

struct PivotStrategy {
  enum class Kind { kFirst, kMiddle, kRandom, kMedianOfThree };

  Kind kind = Kind::kMedianOfThree;
  /// Used by kRandom only.
  std::uint64_t seed = 0;

  static PivotStrategy first() { return {Kind::kFirst, 0}; }
  static PivotStrategy middle() { return {Kind::kMiddle, 0}; }
  static PivotStrategy random(std::uint64_t seed) { return {Kind::kRandom, seed}; }
  static PivotStrategy median_of_three() { return {Kind::kMedianOfThree, 0}; }

  friend bool operator==(const PivotStrategy&, const PivotStrategy&) = default;
};

struct AlgoConfig {
  Algorithm algorithm = Algorithm::kQuicksort;
  std::size_t k = 10;
  std::size_t batch_size = 1;
  bool use_cache = false;
  PivotStrategy pivot;
  bool partial = true;

  friend bool operator==(const AlgoConfig&, const AlgoConfig&) = default;
};

/// Rejects optimizations an algorithm cannot use (batching for heapsort and
/// bubblesort, caching for heapsort and quicksort) with kInvalidConfig.
void validate(const AlgoConfig& config);

std::string_view to_string(Algorithm algorithm);
std::string_view to_string(PivotStrategy::Kind kind);
Algorithm parse_algorithm(std::string_view name);
PivotStrategy::Kind parse_pivot(std::string_view name);

/// Short stable label, e.g. "heapsort", "bubblesort/cached",
/// "quicksort/median3/b2". Non-partial quicksort gets a "/full" suffix.
std::string label(const AlgoConfig& config);

/// Most relevant first.
struct Ranking {
  std::vector<DocId> ordered;

  friend bool operator==(const Ranking&, const Ranking&) = default;
};

struct RunResult {
  Ranking ranking;
  CostLedger ledger;
};

/// Half-open range of positions [lo, hi).
struct Segment {
  std::size_t lo;
  std::size_t hi;

  std::size_t size() const noexcept { return hi - lo; }
};

/// Max-heap built bottom-up, then k extract-max operations. Each sift-down
/// step asks child-vs-child and then winner-vs-parent, one singleton group per
/// comparison. Requires executor.batch_size() == 1.
Ranking heapsort_topk(std::span<const DocId> items, std::size_t k, Oracle& oracle,
                      BatchExecutor& executor);

/// Up to k passes sweeping adjacent pairs from the back of the list towards
/// the front; pass p settles position p. Stops after a pass without swaps.
/// With use_cache the oracle is wrapped in a MemoizedOracle for the run.
/// Requires executor.batch_size() == 1.
Ranking bubblesort_topk(std::span<const DocId> items, std::size_t k, Oracle& oracle,
                        BatchExecutor& executor, bool use_cache);

/// Quicksort with an all-vs-pivot batched partition. With `partial` only
/// segments that start before position k are refined.
Ranking quicksort_topk(std::span<const DocId> items, std::size_t k, Oracle& oracle,
                       BatchExecutor& executor, PivotStrategy pivot, bool partial);

/// An element-vs-pivot outcome already resolved while choosing the pivot.
struct KnownOutcome {
  std::size_t position;
  bool beats_pivot;
};

struct PivotChoice {
  std::size_t position;
  std::vector<KnownOutcome> known;
};

/// Median-of-three submits its three comparisons as one group and returns the
/// element that wins exactly one of them; a cyclic outcome falls back to the
/// middle position. The pivot's outcomes against the other two candidates are
/// returned in `known` so the partition does not ask them again.
PivotChoice choose_pivot(std::span<const DocId> positions, Segment segment, PivotStrategy strategy,
                         std::mt19937_64& rng, BatchExecutor& executor, Oracle& oracle);

/// Pivot position only; see choose_pivot.
std::size_t select_pivot(std::span<const DocId> positions, Segment segment, PivotStrategy strategy,
                         std::mt19937_64& rng, BatchExecutor& executor, Oracle& oracle);

/// Compares every other element of the segment against the pivot in one
/// group (skipping positions listed in `known`), then stably rearranges the
/// segment into [winners..., pivot, losers...]. Returns the pivot's new
/// position.
std::size_t batch_partition(std::span<DocId> positions, Segment segment, std::size_t pivot,
                            BatchExecutor& executor, Oracle& oracle,
                            std::span<const KnownOutcome> known = {});

/// Validates the config, clamps k to the list length (with a warning),
/// builds a fresh executor (and cache, if requested) and runs the algorithm.
RunResult run_algorithm(std::span<const DocId> items, const AlgoConfig& config, Oracle& oracle,
                        std::vector<TraceEntry>* trace = nullptr);

}  // namespace prpsort

#endif  // PRPSORT_ALGORITHMS_HPP_
