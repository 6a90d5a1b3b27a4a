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

// Candidate lists and judgments: TREC run/qrels ingestion and the seeded
// synthetic generator.

#ifndef PRPSORT_DATASET_HPP_
#define PRPSORT_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "prpsort/core.hpp"
#include "prpsort/metrics.hpp"
#include "prpsort/oracle.hpp"

namespace prpsort {

inline constexpr std::size_t kDefaultDepth = 100;

struct QueryCandidates {
  std::string id;
  std::optional<std::string> text;
  /// First-stage order.
  std::vector<Candidate> candidates;

  std::vector<DocId> doc_ids() const;
};

struct Dataset {
  std::string name;
  std::vector<QueryCandidates> queries;
  std::optional<RelevanceMap> grades;
  /// Synthetic mode only: true relevance scores per query id.
  std::map<std::string, ScoreMap> ground_truth;
};

/// Parses a 6-column TREC run ("qid Q0 docid rank score tag"). Queries keep
/// the order of their first appearance; candidates are sorted by rank and
/// truncated to `depth`. Throws kFormatError{line} on a malformed line or a
/// duplicate (qid, docid), kIoError if the file cannot be read.
std::vector<QueryCandidates> parse_run(std::istream& in, std::size_t depth = kDefaultDepth);
std::vector<QueryCandidates> load_run_file(const std::filesystem::path& path,
                                           std::size_t depth = kDefaultDepth);

/// Parses 4-column qrels ("qid iter docid grade"). Negative grades are clamped
/// to 0 with a warning.
RelevanceMap parse_qrels(std::istream& in);
RelevanceMap load_qrels(const std::filesystem::path& path);

/// Two-column "id<TAB>text" files used for query topics and passage corpora.
std::map<std::string, std::string> load_texts(const std::filesystem::path& path);

/// Seed of synthetic query `index`; a pure function of its arguments.
std::uint64_t synthetic_query_seed(std::uint64_t master_seed, std::size_t index);

/// Each query gets a seeded permutation of the scores {1/n, 2/n, ..., 1} and
/// grades by score quantile: top 10% -> 3, next 20% -> 2, next 30% -> 1,
/// rest 0. Query ids are "q1".."qN", doc ids "d1".."dn" zero-padded.
Dataset generate_synthetic(std::size_t num_queries, std::size_t n, std::uint64_t master_seed);

/// Writes the dataset as a run file whose score column holds the
/// ground-truth score and whose rank column follows the candidate order.
void write_run(std::ostream& out, const Dataset& dataset, std::string_view tag = "synthetic");
void write_qrels(std::ostream& out, const Dataset& dataset);

}  // namespace prpsort

#endif  // PRPSORT_DATASET_HPP_
