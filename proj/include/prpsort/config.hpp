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

// Experiment configuration files (JSON) and command-line overrides.
//
// {
//   "datasets": [{"name": "synth", "synthetic": {"queries": 200, "n": 100, "seed": 1}},
//                {"name": "dl19", "run": "run.txt", "qrels": "qrels.txt",
//                 "topics": "topics.tsv", "corpus": "corpus.tsv", "depth": 100}],
//   "oracle": {"kind": "score" | "noisy" | "llm", "source": "run" | "qrels",
//              "flip_probability": 0.1, "seed": 7, "noise": "pair" | "event",
//              "endpoint": {"base_url": "http://localhost:8000", "model": "m", ...}},
//   "algorithms": [{"algorithm": "quicksort", "pivot": "median3", "seed": 0,
//                   "batch_size": 2, "partial": true},
//                  {"algorithm": "bubblesort", "cache": true}],
//   "k": 10, "ndcg_k": 10, "pooling": "query" | "dataset", "jobs": 1,
//   "output": {"path": "report.csv", "format": "csv" | "jsonl"}
// }

#ifndef PRPSORT_CONFIG_HPP_
#define PRPSORT_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "prpsort/experiment.hpp"

namespace prpsort {

ExperimentConfig parse_config(std::string_view json_text);
/// Relative dataset paths are resolved against the directory of `path`.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Command-line overrides; set fields win over the file. Any of algorithm,
/// batch_size, pivot or cache replaces the algorithm matrix with a single
/// entry built from them.
struct ConfigOverrides {
  std::optional<std::string> algorithm;
  std::optional<std::size_t> batch_size;
  std::optional<std::string> pivot;
  std::optional<bool> cache;
  std::optional<std::size_t> k;
  /// Replaces the master seed of every synthetic dataset.
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<std::string> out;
};

void apply_overrides(ExperimentConfig& config, const ConfigOverrides& overrides);

}  // namespace prpsort

#endif  // PRPSORT_CONFIG_HPP_
