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

// Shared vocabulary: document ids, pairwise requests and outcomes, canonical
// pair keys, and the per-run cost ledger.

#ifndef PRPSORT_CORE_HPP_
#define PRPSORT_CORE_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "prpsort/error.hpp"

namespace prpsort {

/// Opaque document identifier, unique within one query's candidate list.
class DocId {
 public:
  DocId() = default;
  explicit DocId(std::string value);

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const DocId&, const DocId&) = default;
  friend bool operator==(const DocId&, const DocId&) = default;

 private:
  std::string value_;
};

std::ostream& operator<<(std::ostream& os, const DocId& id);

struct DocIdHash {
  std::size_t operator()(const DocId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};

struct Candidate {
  DocId doc;
  std::optional<std::string> text;
  std::optional<double> first_stage_score;
};

/// Throws kInvalidConfig on an empty or duplicate id.
void check_unique_ids(std::span<const DocId> items);

struct ComparisonRequest {
  DocId first;
  DocId second;

  friend bool operator==(const ComparisonRequest&, const ComparisonRequest&) = default;
};

/// Which element of the ordered request pair is preferred (more relevant).
enum class Preference : std::uint8_t { kFirst, kSecond };

constexpr Preference flip(Preference p) noexcept {
  return p == Preference::kFirst ? Preference::kSecond : Preference::kFirst;
}

/// Unordered pair identity. `flipped` records whether the request order was
/// reversed to reach lo < hi.
struct PairKey {
  DocId lo;
  DocId hi;
  bool flipped = false;

  friend bool operator==(const PairKey& a, const PairKey& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& key) const noexcept;
};

/// Throws kIdenticalPair when a == b.
PairKey canonical_pair(const DocId& a, const DocId& b);
inline PairKey canonical_pair(const ComparisonRequest& req) {
  return canonical_pair(req.first, req.second);
}

/// Orients a preference expressed over (lo, hi) back onto the request order
/// (and vice versa; the mapping is an involution).
constexpr Preference orient(Preference p, bool flipped) noexcept { return flipped ? flip(p) : p; }

struct CostLedger {
  std::uint64_t comparisons = 0;
  std::uint64_t inference_calls = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t batch_groups = 0;

  friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

/// Field-wise sum; throws kCountOverflow if any field would wrap.
CostLedger ledger_merge(const CostLedger& a, const CostLedger& b);

std::ostream& operator<<(std::ostream& os, const CostLedger& ledger);

}  // namespace prpsort

#endif  // PRPSORT_CORE_HPP_
