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

#include "prpsort/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace prpsort {

void RelevanceMap::set(const std::string& query, const DocId& doc, int grade) {
  grades_[query][doc] = grade;
}

int RelevanceMap::grade(const std::string& query, const DocId& doc) const {
  auto q = grades_.find(query);
  if (q == grades_.end()) return 0;
  auto d = q->second.find(doc);
  return d == q->second.end() ? 0 : d->second;
}

std::vector<int> RelevanceMap::judged(const std::string& query) const {
  std::vector<int> out;
  if (auto q = grades_.find(query); q != grades_.end()) {
    out.reserve(q->second.size());
    for (const auto& [doc, g] : q->second) out.push_back(g);
  }
  return out;
}

bool RelevanceMap::has_query(const std::string& query) const { return grades_.contains(query); }

std::size_t RelevanceMap::size() const noexcept {
  std::size_t n = 0;
  for (const auto& [q, docs] : grades_) n += docs.size();
  return n;
}

namespace {

double gain(int grade) { return std::exp2(static_cast<double>(grade)) - 1.0; }

double discount(std::size_t rank) { return std::log2(static_cast<double>(rank) + 1.0); }

}  // namespace

double ndcg_at_k(std::span<const DocId> ranking, const RelevanceMap& grades,
                 const std::string& query, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidConfig, "ndcg cutoff must be >= 1");

  double dcg = 0.0;
  const std::size_t depth = std::min(k, ranking.size());
  for (std::size_t i = 0; i < depth; ++i) {
    dcg += gain(grades.grade(query, ranking[i])) / discount(i + 1);
  }

  std::vector<int> ideal = grades.judged(query);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, ideal.size()); ++i) {
    idcg += gain(ideal[i]) / discount(i + 1);
  }
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

CostStats aggregate(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptySample, "no values to aggregate");
  // Welford's update.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  return CostStats{mean, std::sqrt(std::max(0.0, m2 / static_cast<double>(n))), n};
}

double percent_gain(double baseline, double optimized) {
  if (!(baseline > 0.0)) {
    throw Error(ErrorCode::kZeroBaseline, "baseline must be positive");
  }
  return 100.0 * (baseline - optimized) / baseline;
}

}  // namespace prpsort
