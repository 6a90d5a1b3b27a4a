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

#include "prpsort/core.hpp"

#include <limits>
#include <random>

#include "doctest.h"

using prpsort::canonical_pair;
using prpsort::CostLedger;
using prpsort::DocId;
using prpsort::Error;
using prpsort::ErrorCode;

TEST_CASE("canonical_pair orders ids and records the flip") {
  const auto a = canonical_pair(DocId("d1"), DocId("d2"));
  CHECK(a.lo == DocId("d1"));
  CHECK(a.hi == DocId("d2"));
  CHECK_FALSE(a.flipped);

  const auto b = canonical_pair(DocId("d2"), DocId("d1"));
  CHECK(b.lo == DocId("d1"));
  CHECK(b.hi == DocId("d2"));
  CHECK(b.flipped);
  CHECK(a == b);
}

TEST_CASE("canonical_pair rejects identical ids") {
  try {
    canonical_pair(DocId("d1"), DocId("d1"));
    FAIL("expected IdenticalPair");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIdenticalPair);
  }
}

TEST_CASE("canonical_pair is symmetric and idempotent") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const DocId a("doc" + std::to_string(rng() % 50));
    const DocId b("doc" + std::to_string(rng() % 50));
    if (a == b) continue;
    const auto ab = canonical_pair(a, b);
    const auto ba = canonical_pair(b, a);
    CHECK(ab.lo == ba.lo);
    CHECK(ab.hi == ba.hi);
    CHECK(ab.flipped != ba.flipped);
    CHECK(ab.lo < ab.hi);
    const auto again = canonical_pair(ab.lo, ab.hi);
    CHECK(again.lo == ab.lo);
    CHECK_FALSE(again.flipped);
    CHECK(prpsort::PairKeyHash{}(ab) == prpsort::PairKeyHash{}(ba));
  }
}

TEST_CASE("orient is an involution") {
  for (auto p : {prpsort::Preference::kFirst, prpsort::Preference::kSecond}) {
    CHECK(prpsort::orient(prpsort::orient(p, true), true) == p);
    CHECK(prpsort::orient(p, false) == p);
  }
}

TEST_CASE("ledger_merge examples") {
  const CostLedger a{5, 3, 2, 3};
  CHECK(prpsort::ledger_merge(a, CostLedger{}) == a);
  CHECK(prpsort::ledger_merge(a, CostLedger{4, 2, 2, 2}) == CostLedger{9, 5, 4, 5});
}

TEST_CASE("ledger_merge of random ledgers equals independent field sums") {
  std::mt19937_64 rng(11);
  std::vector<CostLedger> ledgers;
  std::uint64_t sums[4] = {0, 0, 0, 0};
  for (int i = 0; i < 100; ++i) {
    CostLedger l{rng() % 100000, rng() % 100000, rng() % 100000, rng() % 100000};
    sums[0] += l.comparisons;
    sums[1] += l.inference_calls;
    sums[2] += l.cache_hits;
    sums[3] += l.batch_groups;
    ledgers.push_back(l);
  }
  CostLedger forward{};
  for (const auto& l : ledgers) forward = prpsort::ledger_merge(forward, l);
  CostLedger backward{};
  for (auto it = ledgers.rbegin(); it != ledgers.rend(); ++it) {
    backward = prpsort::ledger_merge(*it, backward);
  }
  CHECK(forward == CostLedger{sums[0], sums[1], sums[2], sums[3]});
  CHECK(backward == forward);
}

TEST_CASE("ledger_merge reports overflow") {
  const CostLedger big{std::numeric_limits<std::uint64_t>::max(), 0, 0, 0};
  try {
    prpsort::ledger_merge(big, CostLedger{1, 0, 0, 0});
    FAIL("expected CountOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCountOverflow);
  }
}

TEST_CASE("check_unique_ids rejects duplicates and empty ids") {
  std::vector<DocId> ok = {DocId("a"), DocId("b")};
  CHECK_NOTHROW(prpsort::check_unique_ids(ok));
  std::vector<DocId> dup = {DocId("a"), DocId("a")};
  CHECK_THROWS_AS(prpsort::check_unique_ids(dup), Error);
  std::vector<DocId> empty = {DocId("")};
  CHECK_THROWS_AS(prpsort::check_unique_ids(empty), Error);
}
