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

#include "prpsort/config.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "prpsort/report.hpp"

namespace prpsort {

using nlohmann::json;

namespace {

DatasetSpec parse_dataset(const json& j, std::size_t index) {
  DatasetSpec ds;
  ds.name = j.value("name", "dataset" + std::to_string(index + 1));
  if (auto s = j.find("synthetic"); s != j.end()) {
    ds.synthetic = true;
    ds.num_queries = s->value("queries", std::size_t{1});
    ds.n = s->value("n", kDefaultDepth);
    ds.seed = s->value("seed", std::uint64_t{0});
    return ds;
  }
  ds.synthetic = false;
  ds.run_path = j.at("run").get<std::string>();
  ds.qrels_path = j.value("qrels", "");
  ds.topics_path = j.value("topics", "");
  ds.corpus_path = j.value("corpus", "");
  ds.depth = j.value("depth", kDefaultDepth);
  return ds;
}

LlmEndpoint parse_endpoint(const json& j) {
  LlmEndpoint ep;
  ep.base_url = j.at("base_url").get<std::string>();
  ep.path = j.value("path", ep.path);
  ep.model = j.value("model", ep.model);
  ep.api_key_env = j.value("api_key_env", ep.api_key_env);
  ep.timeout_seconds = j.value("timeout_seconds", ep.timeout_seconds);
  ep.prompt_template = j.value("template", ep.prompt_template);
  ep.max_tokens = j.value("max_tokens", ep.max_tokens);
  ep.retries = j.value("retries", ep.retries);
  ep.multi_prompt = j.value("multi_prompt", ep.multi_prompt);
  return ep;
}

OracleSpec parse_oracle(const json& j) {
  OracleSpec spec;
  const std::string kind = j.value("kind", "score");
  if (kind == "score") {
    spec.kind = OracleSpec::Kind::kScore;
  } else if (kind == "noisy") {
    spec.kind = OracleSpec::Kind::kNoisy;
    spec.flip_probability = j.value("flip_probability", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    const std::string noise = j.value("noise", "pair");
    if (noise == "pair") {
      spec.noise_mode = NoiseMode::kPerPair;
    } else if (noise == "event") {
      spec.noise_mode = NoiseMode::kPerEvent;
    } else {
      throw Error(ErrorCode::kInvalidConfig, "noise must be 'pair' or 'event'");
    }
  } else if (kind == "llm") {
    spec.kind = OracleSpec::Kind::kLlm;
    spec.endpoint = parse_endpoint(j.at("endpoint"));
  } else {
    throw Error(ErrorCode::kInvalidConfig, "unknown oracle kind '" + kind + "'");
  }
  const std::string source = j.value("source", "run");
  if (source == "run") {
    spec.source = OracleSpec::ScoreSource::kRun;
  } else if (source == "qrels") {
    spec.source = OracleSpec::ScoreSource::kQrels;
  } else {
    throw Error(ErrorCode::kInvalidConfig, "source must be 'run' or 'qrels'");
  }
  return spec;
}

AlgoConfig parse_algo(const json& j, std::size_t default_k) {
  AlgoConfig c;
  c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  c.k = j.value("k", default_k);
  c.batch_size = j.value("batch_size", std::size_t{1});
  c.use_cache = j.value("cache", false);
  c.pivot.kind = parse_pivot(j.value("pivot", "median3"));
  c.pivot.seed = j.value("seed", std::uint64_t{0});
  c.partial = j.value("partial", true);
  return c;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  try {
    const json j = json::parse(json_text);
    ExperimentConfig config;
    const std::size_t k = j.value("k", std::size_t{10});
    std::size_t index = 0;
    for (const auto& ds : j.at("datasets")) config.datasets.push_back(parse_dataset(ds, index++));
    for (const auto& a : j.at("algorithms")) config.algorithms.push_back(parse_algo(a, k));
    if (auto o = j.find("oracle"); o != j.end()) config.oracle = parse_oracle(*o);
    config.ndcg_k = j.value("ndcg_k", std::size_t{10});
    config.jobs = j.value("jobs", 1u);
    const std::string pooling = j.value("pooling", "query");
    if (pooling == "query") {
      config.pooling = Pooling::kQuery;
    } else if (pooling == "dataset") {
      config.pooling = Pooling::kDataset;
    } else {
      throw Error(ErrorCode::kInvalidConfig, "pooling must be 'query' or 'dataset'");
    }
    if (auto out = j.find("output"); out != j.end()) {
      config.out_path = out->value("path", "");
      config.format = parse_format(out->value("format", "csv"));
    }
    return config;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  ExperimentConfig config = parse_config(text.str());
  // Dataset files are relative to the config file; the output path is not.
  const std::filesystem::path base = path.parent_path();
  auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).string();
  };
  for (auto& ds : config.datasets) {
    resolve(ds.run_path);
    resolve(ds.qrels_path);
    resolve(ds.topics_path);
    resolve(ds.corpus_path);
  }
  return config;
}

void apply_overrides(ExperimentConfig& config, const ConfigOverrides& o) {
  if (o.algorithm || o.batch_size || o.pivot || o.cache) {
    AlgoConfig c;
    if (!config.algorithms.empty()) c.k = config.algorithms.front().k;
    c.algorithm = parse_algorithm(o.algorithm.value_or("quicksort"));
    c.batch_size = o.batch_size.value_or(1);
    c.use_cache = o.cache.value_or(false);
    if (o.pivot) c.pivot.kind = parse_pivot(*o.pivot);
    config.algorithms = {c};
  }
  if (o.k) {
    for (auto& a : config.algorithms) a.k = *o.k;
  }
  if (o.seed) {
    for (auto& ds : config.datasets) ds.seed = *o.seed;
  }
  if (o.format) config.format = parse_format(*o.format);
  if (o.out) config.out_path = *o.out;
}

}  // namespace prpsort
