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

#include "prpsort/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <set>
#include <thread>
#include <utility>

#include "prpsort/seed.hpp"

namespace prpsort {

void validate(const ExperimentConfig& config) {
  if (config.datasets.empty()) throw Error(ErrorCode::kInvalidConfig, "no datasets");
  if (config.algorithms.empty()) throw Error(ErrorCode::kInvalidConfig, "no algorithms");
  if (config.ndcg_k == 0) throw Error(ErrorCode::kInvalidConfig, "ndcg_k must be >= 1");
  if (config.jobs == 0) throw Error(ErrorCode::kInvalidConfig, "jobs must be >= 1");

  std::set<std::string> labels;
  for (const auto& algo : config.algorithms) {
    validate(algo);
    if (!labels.insert(label(algo)).second) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate algorithm entry " + label(algo));
    }
  }
  std::set<std::string> names;
  for (const auto& ds : config.datasets) {
    if (ds.name.empty() || ds.name == "*") {
      throw Error(ErrorCode::kInvalidConfig, "invalid dataset name '" + ds.name + "'");
    }
    if (!names.insert(ds.name).second) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate dataset name " + ds.name);
    }
    if (ds.synthetic) {
      if (ds.num_queries == 0 || ds.n == 0) {
        throw Error(ErrorCode::kInvalidConfig, "synthetic dataset needs queries and n >= 1");
      }
      if (config.oracle.kind == OracleSpec::Kind::kLlm) {
        throw Error(ErrorCode::kInvalidConfig,
                    "synthetic datasets have no passage text; use a score or noisy oracle");
      }
    } else if (ds.run_path.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "dataset " + ds.name + " needs a run file");
    }
  }
  if (config.oracle.kind == OracleSpec::Kind::kNoisy &&
      !(config.oracle.flip_probability >= 0.0 && config.oracle.flip_probability <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "flip_probability must lie in [0, 1]");
  }
}

Dataset load_dataset(const DatasetSpec& spec) {
  if (spec.synthetic) {
    Dataset ds = generate_synthetic(spec.num_queries, spec.n, spec.seed);
    ds.name = spec.name;
    return ds;
  }
  Dataset ds;
  ds.name = spec.name;
  ds.queries = load_run_file(spec.run_path, spec.depth);
  if (!spec.qrels_path.empty()) ds.grades = load_qrels(spec.qrels_path);
  if (!spec.topics_path.empty()) {
    const auto topics = load_texts(spec.topics_path);
    for (auto& q : ds.queries) {
      if (auto it = topics.find(q.id); it != topics.end()) q.text = it->second;
    }
  }
  if (!spec.corpus_path.empty()) {
    const auto corpus = load_texts(spec.corpus_path);
    for (auto& q : ds.queries) {
      for (auto& c : q.candidates) {
        if (auto it = corpus.find(c.doc.str()); it != corpus.end()) c.text = it->second;
      }
    }
  }
  return ds;
}

namespace {

std::uint64_t query_salt(const Dataset& dataset, const QueryCandidates& query) {
  return fnv1a(query.id, fnv1a("\x1f", fnv1a(dataset.name)));
}

ScoreMap scores_for(const OracleSpec& spec, const Dataset& dataset, const QueryCandidates& query) {
  if (auto it = dataset.ground_truth.find(query.id); it != dataset.ground_truth.end()) {
    return it->second;
  }
  ScoreMap scores;
  for (const auto& c : query.candidates) {
    if (spec.source == OracleSpec::ScoreSource::kQrels) {
      if (!dataset.grades) {
        throw Error(ErrorCode::kInvalidConfig, "qrels score source needs a qrels file");
      }
      scores.emplace(c.doc, static_cast<double>(dataset.grades->grade(query.id, c.doc)));
    } else {
      if (!c.first_stage_score) {
        throw Error(ErrorCode::kUnknownDoc, "no score for document " + c.doc.str());
      }
      scores.emplace(c.doc, *c.first_stage_score);
    }
  }
  return scores;
}

}  // namespace

std::unique_ptr<Oracle> make_oracle(const OracleSpec& spec, const Dataset& dataset,
                                    const QueryCandidates& query,
                                    std::shared_ptr<const LlmClient> client) {
  switch (spec.kind) {
    case OracleSpec::Kind::kScore:
      return std::make_unique<ScoreOracle>(scores_for(spec, dataset, query));
    case OracleSpec::Kind::kNoisy:
      return std::make_unique<NoisyOracle>(
          std::make_unique<ScoreOracle>(scores_for(spec, dataset, query)), spec.flip_probability,
          mix_seed(spec.seed, query_salt(dataset, query)), spec.noise_mode);
    case OracleSpec::Kind::kLlm: {
      if (!query.text) {
        throw Error(ErrorCode::kMissingText, "query " + query.id + " has no text");
      }
      CandidateMap candidates;
      for (const auto& c : query.candidates) {
        if (!c.text) {
          throw Error(ErrorCode::kMissingText, "candidate " + c.doc.str() + " has no text");
        }
        candidates.emplace(c.doc, c);
      }
      return std::make_unique<LlmOracle>(std::move(client), *query.text, std::move(candidates));
    }
  }
  throw Error(ErrorCode::kInvalidConfig, "unknown oracle kind");
}

namespace {

struct Cell {
  const Dataset* dataset;
  const QueryCandidates* query;
  const AlgoConfig* config;
};

QueryRow run_cell(const Cell& cell, const ExperimentConfig& config,
                  const std::shared_ptr<const LlmClient>& client) {
  QueryRow row;
  row.dataset = cell.dataset->name;
  row.query_id = cell.query->id;
  row.label = label(*cell.config);
  row.config = *cell.config;
  try {
    auto oracle = make_oracle(config.oracle, *cell.dataset, *cell.query, client);
    AlgoConfig algo = *cell.config;
    if (algo.pivot.kind == PivotStrategy::Kind::kRandom) {
      algo.pivot.seed = mix_seed(algo.pivot.seed, query_salt(*cell.dataset, *cell.query));
    }
    const std::vector<DocId> items = cell.query->doc_ids();
    const RunResult result = run_algorithm(items, algo, *oracle);
    row.ledger = result.ledger;
    if (cell.dataset->grades) {
      row.ndcg =
          ndcg_at_k(result.ranking.ordered, *cell.dataset->grades, cell.query->id, config.ndcg_k);
    }
  } catch (const Error& e) {
    row.ok = false;
    row.error = e.what();
    row.ledger = {};
  }
  return row;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  std::vector<Dataset> datasets;
  datasets.reserve(config.datasets.size());
  for (const auto& spec : config.datasets) datasets.push_back(load_dataset(spec));

  std::shared_ptr<const LlmClient> client;
  if (config.oracle.kind == OracleSpec::Kind::kLlm) {
    client = std::make_shared<const LlmClient>(config.oracle.endpoint);
  }

  std::vector<Cell> cells;
  for (const auto& ds : datasets) {
    for (const auto& q : ds.queries) {
      for (const auto& algo : config.algorithms) cells.push_back({&ds, &q, &algo});
    }
  }

  ExperimentReport report;
  report.pooling = config.pooling;
  report.queries.resize(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      report.queries[i] = run_cell(cells[i], config, client);
    }
  };
  const unsigned jobs = std::min<std::size_t>(config.jobs, std::max<std::size_t>(1, cells.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  summarize(report);
  return report;
}

namespace {

AggregateRow aggregate_rows(std::string dataset, const std::vector<const QueryRow*>& rows) {
  AggregateRow agg;
  agg.dataset = std::move(dataset);
  agg.label = rows.front()->label;
  agg.config = rows.front()->config;
  std::vector<double> comparisons, calls, hits, ndcg;
  bool all_ndcg = true;
  for (const QueryRow* r : rows) {
    if (!r->ok) {
      ++agg.failures;
      continue;
    }
    comparisons.push_back(static_cast<double>(r->ledger.comparisons));
    calls.push_back(static_cast<double>(r->ledger.inference_calls));
    hits.push_back(static_cast<double>(r->ledger.cache_hits));
    if (r->ndcg) {
      ndcg.push_back(*r->ndcg);
    } else {
      all_ndcg = false;
    }
  }
  if (!comparisons.empty()) {
    agg.comparisons = aggregate(comparisons);
    agg.inference_calls = aggregate(calls);
    agg.mean_cache_hits = aggregate(hits).mean;
    if (all_ndcg) agg.mean_ndcg = aggregate(ndcg).mean;
  }
  return agg;
}

// Means of the per-dataset means.
AggregateRow pool_datasets(const std::vector<const AggregateRow*>& parts) {
  AggregateRow agg;
  agg.dataset = "*";
  agg.label = parts.front()->label;
  agg.config = parts.front()->config;
  std::vector<double> comparisons, calls, hits, ndcg;
  bool all_ndcg = true;
  for (const AggregateRow* p : parts) {
    agg.failures += p->failures;
    if (!p->comparisons) continue;
    comparisons.push_back(p->comparisons->mean);
    calls.push_back(p->inference_calls->mean);
    hits.push_back(*p->mean_cache_hits);
    if (p->mean_ndcg) {
      ndcg.push_back(*p->mean_ndcg);
    } else {
      all_ndcg = false;
    }
  }
  if (!comparisons.empty()) {
    agg.comparisons = aggregate(comparisons);
    agg.inference_calls = aggregate(calls);
    agg.mean_cache_hits = aggregate(hits).mean;
    if (all_ndcg) agg.mean_ndcg = aggregate(ndcg).mean;
  }
  return agg;
}

void add_gains(const std::vector<AggregateRow>& aggs, std::size_t begin,
               std::vector<GainRow>& gains) {
  std::map<std::string, const AggregateRow*> by_label;
  for (std::size_t i = begin; i < aggs.size(); ++i) by_label[aggs[i].label] = &aggs[i];

  auto emit = [&](const AggregateRow& row, const std::string& baseline_label) {
    auto it = by_label.find(baseline_label);
    if (it == by_label.end() || !row.inference_calls || !it->second->inference_calls) return;
    const double base = it->second->inference_calls->mean;
    if (!(base > 0.0)) return;
    gains.push_back(GainRow{row.dataset, row.label, baseline_label,
                            percent_gain(base, row.inference_calls->mean)});
  };
  for (std::size_t i = begin; i < aggs.size(); ++i) {
    const AggregateRow& row = aggs[i];
    if (row.config.algorithm == Algorithm::kQuicksort) {
      emit(row, "heapsort");
      if (row.config.batch_size > 1) {
        AlgoConfig unbatched = row.config;
        unbatched.batch_size = 1;
        emit(row, label(unbatched));
      }
    } else if (row.config.algorithm == Algorithm::kBubblesort && row.config.use_cache) {
      emit(row, "bubblesort/classic");
    }
  }
}

}  // namespace

void summarize(ExperimentReport& report) {
  report.aggregates.clear();
  report.gains.clear();

  std::vector<std::string> datasets;
  std::vector<std::string> labels;
  std::map<std::pair<std::string, std::string>, std::vector<const QueryRow*>> groups;
  std::map<std::string, std::vector<const QueryRow*>> pooled;
  for (const auto& row : report.queries) {
    if (std::find(datasets.begin(), datasets.end(), row.dataset) == datasets.end()) {
      datasets.push_back(row.dataset);
    }
    if (std::find(labels.begin(), labels.end(), row.label) == labels.end()) {
      labels.push_back(row.label);
    }
    groups[{row.dataset, row.label}].push_back(&row);
    pooled[row.label].push_back(&row);
  }

  for (const auto& ds : datasets) {
    const std::size_t begin = report.aggregates.size();
    for (const auto& lb : labels) {
      auto it = groups.find({ds, lb});
      if (it != groups.end()) report.aggregates.push_back(aggregate_rows(ds, it->second));
    }
    add_gains(report.aggregates, begin, report.gains);
  }

  if (datasets.size() > 1) {
    const std::size_t per_dataset_end = report.aggregates.size();
    std::vector<AggregateRow> pooled_rows;
    for (const auto& lb : labels) {
      if (report.pooling == Pooling::kQuery) {
        pooled_rows.push_back(aggregate_rows("*", pooled[lb]));
      } else {
        std::vector<const AggregateRow*> parts;
        for (std::size_t i = 0; i < per_dataset_end; ++i) {
          if (report.aggregates[i].label == lb) parts.push_back(&report.aggregates[i]);
        }
        pooled_rows.push_back(pool_datasets(parts));
      }
    }
    for (auto& row : pooled_rows) report.aggregates.push_back(std::move(row));
    add_gains(report.aggregates, per_dataset_end, report.gains);
  }
}

}  // namespace prpsort
