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
#include <unordered_set>
#include <utility>

#include "prpsort/seed.hpp"

namespace prpsort {

DocId::DocId(std::string value) : value_(std::move(value)) {}

std::ostream& operator<<(std::ostream& os, const DocId& id) { return os << id.str(); }

void check_unique_ids(std::span<const DocId> items) {
  std::unordered_set<DocId, DocIdHash> seen;
  seen.reserve(items.size());
  for (const auto& id : items) {
    if (id.empty()) throw Error(ErrorCode::kInvalidConfig, "empty document id");
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate document id " + id.str());
    }
  }
}

std::size_t PairKeyHash::operator()(const PairKey& key) const noexcept {
  std::uint64_t h = fnv1a(key.lo.str());
  h = fnv1a("\x1f", h);
  return static_cast<std::size_t>(fnv1a(key.hi.str(), h));
}

PairKey canonical_pair(const DocId& a, const DocId& b) {
  if (a == b) {
    throw Error(ErrorCode::kIdenticalPair, "cannot compare " + a.str() + " with itself");
  }
  if (b < a) return PairKey{b, a, true};
  return PairKey{a, b, false};
}

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* field) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b) {
    throw Error(ErrorCode::kCountOverflow, std::string(field) + " overflows");
  }
  return a + b;
}

}  // namespace

CostLedger ledger_merge(const CostLedger& a, const CostLedger& b) {
  return CostLedger{
      checked_add(a.comparisons, b.comparisons, "comparisons"),
      checked_add(a.inference_calls, b.inference_calls, "inference_calls"),
      checked_add(a.cache_hits, b.cache_hits, "cache_hits"),
      checked_add(a.batch_groups, b.batch_groups, "batch_groups"),
  };
}

std::ostream& operator<<(std::ostream& os, const CostLedger& l) {
  return os << "{comparisons=" << l.comparisons << ", inference_calls=" << l.inference_calls
            << ", cache_hits=" << l.cache_hits << ", batch_groups=" << l.batch_groups << '}';
}

}  // namespace prpsort
