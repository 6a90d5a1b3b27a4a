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

// Experiment sweeps: every (query, algorithm config) cell gets a fresh
// executor, cache and rng; results are aggregated per dataset and pooled.

#ifndef PRPSORT_EXPERIMENT_HPP_
#define PRPSORT_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prpsort/algorithms.hpp"
#include "prpsort/dataset.hpp"
#include "prpsort/llm.hpp"
#include "prpsort/metrics.hpp"
#include "prpsort/oracle.hpp"

namespace prpsort {

struct DatasetSpec {
  std::string name = "default";
  bool synthetic = true;
  // synthetic
  std::size_t num_queries = 1;
  std::size_t n = kDefaultDepth;
  std::uint64_t seed = 0;
  // files
  std::string run_path;
  std::string qrels_path;
  std::string topics_path;
  std::string corpus_path;
  std::size_t depth = kDefaultDepth;
};

struct OracleSpec {
  enum class Kind { kScore, kNoisy, kLlm };
  /// Where score/noisy oracles take their scores from for file datasets:
  /// the run file's score column or the qrels grades.
  enum class ScoreSource { kRun, kQrels };

  Kind kind = Kind::kScore;
  ScoreSource source = ScoreSource::kRun;
  double flip_probability = 0.0;
  std::uint64_t seed = 0;
  NoiseMode noise_mode = NoiseMode::kPerPair;
  LlmEndpoint endpoint;
};

enum class ReportFormat { kCsv, kJsonLines };

/// How pooled ("*") aggregates combine several datasets: pool every
/// per-query row, or average the per-dataset means.
enum class Pooling { kQuery, kDataset };

struct ExperimentConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<AlgoConfig> algorithms;
  OracleSpec oracle;
  std::size_t ndcg_k = 10;
  Pooling pooling = Pooling::kQuery;
  unsigned jobs = 1;
  std::string out_path;
  ReportFormat format = ReportFormat::kCsv;
};

/// Throws kInvalidConfig on an unusable combination.
void validate(const ExperimentConfig& config);

struct QueryRow {
  std::string dataset;
  std::string query_id;
  std::string label;
  AlgoConfig config;
  bool ok = true;
  CostLedger ledger;
  std::optional<double> ndcg;
  std::string error;
};

struct AggregateRow {
  std::string dataset;  // "*" for pooled rows
  std::string label;
  AlgoConfig config;
  std::size_t failures = 0;
  std::optional<CostStats> comparisons;
  std::optional<CostStats> inference_calls;
  std::optional<double> mean_cache_hits;
  std::optional<double> mean_ndcg;

  std::size_t n() const noexcept { return comparisons ? comparisons->n : 0; }
};

/// Percentage of mean inference calls saved by `label` over `baseline`.
struct GainRow {
  std::string dataset;
  std::string label;
  std::string baseline;
  double gain_percent = 0.0;
};

struct ExperimentReport {
  Pooling pooling = Pooling::kQuery;
  std::vector<QueryRow> queries;
  std::vector<AggregateRow> aggregates;
  std::vector<GainRow> gains;
};

/// Builds the oracle for one query. Exposed for tests and bindings.
std::unique_ptr<Oracle> make_oracle(const OracleSpec& spec, const Dataset& dataset,
                                    const QueryCandidates& query,
                                    std::shared_ptr<const LlmClient> client);

Dataset load_dataset(const DatasetSpec& spec);

/// Runs the whole matrix. Oracle failures on a query are recorded on its row
/// and excluded from aggregates.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Recomputes aggregate and gain rows from the per-query rows.
void summarize(ExperimentReport& report);

}  // namespace prpsort

#endif  // PRPSORT_EXPERIMENT_HPP_
