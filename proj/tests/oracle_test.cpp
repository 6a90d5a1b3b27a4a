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

#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "prpsort/algorithms.hpp"
#include "test_support.hpp"

using namespace prpsort;
using prpsort::testing::CountingOracle;
using prpsort::testing::FunctionOracle;
using prpsort::testing::make_ids;
using prpsort::testing::make_scores;

namespace {

ScoreMap two_docs(double a, double b) { return ScoreMap{{DocId("d1"), a}, {DocId("d2"), b}}; }

const ComparisonRequest kD1D2{DocId("d1"), DocId("d2")};
const ComparisonRequest kD2D1{DocId("d2"), DocId("d1")};

}  // namespace

TEST_CASE("score oracle prefers the larger score") {
  ScoreOracle oracle(two_docs(0.9, 0.1));
  CHECK(oracle.compare(kD1D2) == Preference::kFirst);
  CHECK(oracle.compare(kD2D1) == Preference::kSecond);
}

TEST_CASE("score oracle breaks ties towards the smaller id") {
  ScoreOracle oracle(two_docs(0.5, 0.5));
  CHECK(oracle.compare(kD2D1) == Preference::kSecond);
  CHECK(oracle.compare(kD1D2) == Preference::kFirst);
}

TEST_CASE("score oracle reports unknown documents") {
  ScoreOracle oracle(two_docs(0.5, 0.4));
  try {
    oracle.compare({DocId("d1"), DocId("zz")});
    FAIL("expected UnknownDoc");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownDoc);
  }
}

TEST_CASE("noisy oracle with zero flip probability equals its base") {
  std::mt19937_64 rng(3);
  const auto ids = make_ids(30);
  const ScoreMap scores = prpsort::testing::random_distinct_scores(ids, rng);
  ScoreOracle base(scores);
  NoisyOracle noisy(std::make_unique<ScoreOracle>(scores), 0.0, 1234);
  NoisyOracle noisy_event(std::make_unique<ScoreOracle>(scores), 0.0, 1234, NoiseMode::kPerEvent);
  for (const auto& a : ids) {
    for (const auto& b : ids) {
      if (a == b) continue;
      CHECK(noisy.compare({a, b}) == base.compare({a, b}));
      CHECK(noisy_event.compare({a, b}) == base.compare({a, b}));
    }
  }
}

TEST_CASE("noisy oracle with flip probability one always flips") {
  NoisyOracle noisy(std::make_unique<ScoreOracle>(two_docs(0.9, 0.1)), 1.0, 5);
  CHECK(noisy.compare(kD1D2) == Preference::kSecond);
  CHECK(noisy.compare(kD2D1) == Preference::kFirst);
}

TEST_CASE("per-pair noise is consistent across repeats and orientations") {
  std::mt19937_64 rng(9);
  const auto ids = make_ids(25);
  const ScoreMap scores = prpsort::testing::random_distinct_scores(ids, rng);
  NoisyOracle noisy(std::make_unique<ScoreOracle>(scores), 0.3, 77);
  ScoreOracle base(scores);
  std::size_t flipped = 0, total = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      const Preference ab = noisy.compare({ids[i], ids[j]});
      CHECK(noisy.compare({ids[i], ids[j]}) == ab);
      CHECK(noisy.compare({ids[j], ids[i]}) == flip(ab));
      flipped += ab != base.compare({ids[i], ids[j]});
      ++total;
    }
  }
  // 300 pairs at p = 0.3: the flip rate should be well inside (0.2, 0.4).
  const double rate = static_cast<double>(flipped) / static_cast<double>(total);
  CHECK(rate > 0.2);
  CHECK(rate < 0.4);
}

TEST_CASE("noisy oracle is reproducible for a fixed seed") {
  const auto ids = make_ids(10);
  std::mt19937_64 rng(1);
  const ScoreMap scores = prpsort::testing::random_distinct_scores(ids, rng);
  for (auto mode : {NoiseMode::kPerPair, NoiseMode::kPerEvent}) {
    NoisyOracle a(std::make_unique<ScoreOracle>(scores), 0.4, 99, mode);
    NoisyOracle b(std::make_unique<ScoreOracle>(scores), 0.4, 99, mode);
    for (std::size_t i = 1; i < ids.size(); ++i) {
      CHECK(a.compare({ids[i - 1], ids[i]}) == b.compare({ids[i - 1], ids[i]}));
    }
  }
}

TEST_CASE("noisy oracle rejects probabilities outside [0, 1]") {
  CHECK_THROWS_AS(NoisyOracle(std::make_unique<ScoreOracle>(two_docs(1, 0)), 1.5, 0), Error);
  CHECK_THROWS_AS(NoisyOracle(std::make_unique<ScoreOracle>(two_docs(1, 0)), -0.1, 0), Error);
}

TEST_CASE("memoized oracle reaches the base once per unordered pair") {
  auto counting =
      std::make_unique<CountingOracle>(std::make_unique<ScoreOracle>(two_docs(0.2, 0.8)));
  CountingOracle* probe = counting.get();
  MemoizedOracle memo(std::move(counting));

  auto [first, hit1] = memo.compare_tracked(kD1D2);
  CHECK(first == Preference::kSecond);
  CHECK_FALSE(hit1);
  auto [again, hit2] = memo.compare_tracked(kD1D2);
  CHECK(again == Preference::kSecond);
  CHECK(hit2);
  auto [reversed, hit3] = memo.compare_tracked(kD2D1);
  CHECK(reversed == Preference::kFirst);
  CHECK(hit3);
  CHECK(probe->comparisons == 1);
}

TEST_CASE("memoized oracle leaves the cache untouched when the base throws") {
  bool fail = true;
  MemoizedOracle memo(std::make_unique<FunctionOracle>([&](const ComparisonRequest&) {
    if (fail) throw Error(ErrorCode::kBackendFailure, "down");
    return Preference::kFirst;
  }));
  CHECK_THROWS_AS(memo.compare(kD1D2), Error);
  CHECK(memo.size() == 0);
  CHECK_FALSE(memo.lookup(kD1D2).has_value());
  fail = false;
  CHECK(memo.compare_tracked(kD1D2) == std::pair{Preference::kFirst, false});
}

TEST_CASE("memoized noisy oracle stays consistent under per-event noise") {
  std::mt19937_64 rng(5);
  const auto ids = make_ids(12);
  const ScoreMap scores = prpsort::testing::random_distinct_scores(ids, rng);
  MemoizedOracle memo(std::make_unique<NoisyOracle>(std::make_unique<ScoreOracle>(scores), 0.5, 21,
                                                    NoiseMode::kPerEvent));
  std::map<std::pair<std::string, std::string>, Preference> seen;
  for (int round = 0; round < 5; ++round) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = 0; j < ids.size(); ++j) {
        if (i == j) continue;
        const Preference p = memo.compare({ids[i], ids[j]});
        const auto key = std::pair{ids[i].str(), ids[j].str()};
        if (auto it = seen.find(key); it != seen.end()) CHECK(it->second == p);
        seen[key] = p;
        if (auto rev = seen.find({ids[j].str(), ids[i].str()}); rev != seen.end()) {
          CHECK(rev->second == flip(p));
        }
      }
    }
  }
}

TEST_CASE("executor charges ceil(misses / batch_size) calls per group") {
  const auto ids = make_ids(100);
  std::vector<double> s(100);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(i);
  ScoreOracle oracle(make_scores(ids, s));

  auto group_of = [&](std::size_t g) {
    std::vector<ComparisonRequest> group;
    for (std::size_t i = 1; i <= g; ++i) group.push_back({ids[i], ids[0]});
    return group;
  };

  SUBCASE("batch 2, five misses") {
    BatchExecutor exec(2);
    exec.submit_group(oracle, group_of(5));
    CHECK(exec.ledger() == CostLedger{5, 3, 0, 1});
  }
  SUBCASE("batch 1 charges one call per comparison") {
    BatchExecutor exec(1);
    exec.submit_group(oracle, group_of(7));
    CHECK(exec.ledger().inference_calls == 7);
    CHECK(exec.ledger().comparisons == 7);
  }
  SUBCASE("batch 128, 99 misses is one call") {
    BatchExecutor exec(128);
    exec.submit_group(oracle, group_of(99));
    CHECK(exec.ledger() == CostLedger{99, 1, 0, 1});
  }
  SUBCASE("empty group changes nothing") {
    BatchExecutor exec(4);
    CHECK(exec.submit_group(oracle, {}).empty());
    CHECK(exec.ledger() == CostLedger{});
  }
  SUBCASE("batch size zero is rejected") { CHECK_THROWS_AS(BatchExecutor(0), Error); }
}

TEST_CASE("executor counts cache hits separately from inference calls") {
  const auto ids = make_ids(6);
  MemoizedOracle memo(std::make_unique<ScoreOracle>(make_scores(ids, {6, 5, 4, 3, 2, 1})));
  BatchExecutor exec(2);
  std::vector<ComparisonRequest> first = {{ids[0], ids[1]}, {ids[2], ids[3]}, {ids[4], ids[5]}};
  exec.submit_group(memo, first);
  CHECK(exec.ledger() == CostLedger{3, 2, 0, 1});

  std::vector<ComparisonRequest> second = {{ids[1], ids[0]}, {ids[0], ids[2]}, {ids[3], ids[2]}};
  const auto out = exec.submit_group(memo, second);
  CHECK(out[0] == Preference::kSecond);
  CHECK(out[1] == Preference::kFirst);
  CHECK(out[2] == Preference::kSecond);
  CHECK(exec.ledger() == CostLedger{6, 3, 2, 2});

  // All hits: no call and no new group.
  exec.submit_group(memo, second);
  CHECK(exec.ledger() == CostLedger{9, 3, 5, 2});
}

TEST_CASE("grouping never changes outcomes and obeys the ceiling law") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 20;
    const auto ids = make_ids(n);
    const ScoreMap scores = prpsort::testing::random_distinct_scores(ids, rng);
    NoisyOracle oracle(std::make_unique<ScoreOracle>(scores), 0.25, trial);

    std::vector<ComparisonRequest> reqs;
    const std::size_t m = 1 + rng() % 40;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t a = rng() % n;
      std::size_t b = rng() % n;
      if (a == b) b = (b + 1) % n;
      reqs.push_back({ids[a], ids[b]});
    }
    std::vector<Preference> one_by_one;
    for (const auto& r : reqs) one_by_one.push_back(oracle.compare(r));

    const std::size_t batch = 1 + rng() % 9;
    BatchExecutor exec(batch);
    std::vector<Preference> grouped;
    std::uint64_t expected_calls = 0;
    for (std::size_t start = 0; start < reqs.size();) {
      const std::size_t len = std::min<std::size_t>(1 + rng() % 7, reqs.size() - start);
      std::span<const ComparisonRequest> group(reqs.data() + start, len);
      const auto out = exec.submit_group(oracle, group);
      grouped.insert(grouped.end(), out.begin(), out.end());
      expected_calls += (len + batch - 1) / batch;
      start += len;
    }
    CHECK(grouped == one_by_one);
    CHECK(exec.ledger().inference_calls == expected_calls);
    CHECK(exec.ledger().comparisons == reqs.size());
  }
}

TEST_CASE("backend failure aborts the group and keeps completed calls only") {
  const auto ids = make_ids(8);
  int answered = 0;
  FunctionOracle flaky([&](const ComparisonRequest&) {
    if (answered == 4) throw Error(ErrorCode::kBackendFailure, "timeout");
    ++answered;
    return Preference::kFirst;
  });
  BatchExecutor exec(2);
  std::vector<ComparisonRequest> group;
  for (std::size_t i = 1; i < 8; ++i) group.push_back({ids[i], ids[0]});
  CHECK_THROWS_AS(exec.submit_group(flaky, group), Error);
  CHECK(exec.ledger() == CostLedger{4, 2, 0, 1});
}

TEST_CASE("executor trace records every answered comparison") {
  const auto ids = make_ids(4);
  ScoreOracle oracle(make_scores(ids, {1, 2, 3, 4}));
  std::vector<TraceEntry> trace;
  BatchExecutor exec(3);
  exec.set_trace(&trace);
  std::vector<ComparisonRequest> group = {{ids[0], ids[1]}, {ids[3], ids[2]}};
  exec.submit_group(oracle, group);
  REQUIRE(trace.size() == 2);
  CHECK(trace[0].request == group[0]);
  CHECK(trace[0].outcome == Preference::kSecond);
  CHECK(trace[1].outcome == Preference::kFirst);
  CHECK_FALSE(trace[1].cache_hit);
}

TEST_CASE("cached bubblesort hit count matches an independent replay of the pair log") {
  std::mt19937_64 rng(2024);
  const auto ids = make_ids(100);
  for (int trial = 0; trial < 20; ++trial) {
    const ScoreMap scores = prpsort::testing::random_distinct_scores(ids, rng);
    ScoreOracle oracle(scores);

    // Replay oracle: log every pair of the classic run, count repeats.
    std::vector<TraceEntry> classic;
    AlgoConfig config{Algorithm::kBubblesort, 10, 1, false, {}, true};
    run_algorithm(ids, config, oracle, &classic);
    std::set<std::pair<std::string, std::string>> seen;
    std::uint64_t repeats = 0;
    for (const auto& e : classic) {
      auto a = e.request.first.str(), b = e.request.second.str();
      if (b < a) std::swap(a, b);
      repeats += !seen.emplace(a, b).second;
    }

    config.use_cache = true;
    const RunResult cached = run_algorithm(ids, config, oracle);
    CHECK(cached.ledger.cache_hits == repeats);
    CHECK(cached.ledger.cache_hits == cached.ledger.comparisons - cached.ledger.inference_calls);
    CHECK(cached.ledger.comparisons == classic.size());
  }
}
