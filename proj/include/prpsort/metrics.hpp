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

#ifndef PRPSORT_METRICS_HPP_
#define PRPSORT_METRICS_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prpsort/core.hpp"

namespace prpsort {

/// Graded judgments per (query id, doc). Unjudged pairs have grade 0.
class RelevanceMap {
 public:
  void set(const std::string& query, const DocId& doc, int grade);
  int grade(const std::string& query, const DocId& doc) const;

  /// Grades of every judged document for the query, in no particular order.
  std::vector<int> judged(const std::string& query) const;
  bool has_query(const std::string& query) const;
  std::size_t size() const noexcept;

 private:
  std::map<std::string, std::map<DocId, int>> grades_;
};

/// Exponential-gain NDCG with a log2(i + 1) discount. The ideal DCG uses every
/// judged document of the query; returns 0 when it is zero.
double ndcg_at_k(std::span<const DocId> ranking, const RelevanceMap& grades,
                 const std::string& query, std::size_t k);

struct CostStats {
  double mean = 0.0;
  /// Population standard deviation.
  double sd = 0.0;
  std::size_t n = 0;
};

CostStats aggregate(std::span<const double> values);

/// 100 * (baseline - optimized) / baseline. Throws kZeroBaseline unless
/// baseline > 0.
double percent_gain(double baseline, double optimized);

}  // namespace prpsort

#endif  // PRPSORT_METRICS_HPP_
