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

// prp-sort: run top-k pairwise ranking sweeps and emit cost reports.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "prpsort/config.hpp"
#include "prpsort/dataset.hpp"
#include "prpsort/experiment.hpp"
#include "prpsort/report.hpp"
#include "prpsort/version.hpp"

namespace {

template <typename T>
void set_if(CLI::Option* opt, std::optional<T>& target, const T& value) {
  if (opt->count() > 0) target = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Top-k pairwise ranking under an inference-call cost model"};
  app.name("prp-sort");
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run an experiment matrix and write a report");
  std::string config_path;
  std::string algo, pivot, format, out;
  std::size_t batch_size = 1, k = 10;
  bool cache = false;
  std::uint64_t seed = 0;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  auto* algo_opt = run->add_option("--algo", algo, "heapsort | bubblesort | quicksort");
  auto* batch_opt = run->add_option("--batch-size", batch_size, "Comparisons per inference call");
  auto* pivot_opt = run->add_option("--pivot", pivot, "first | middle | random | median3");
  auto* cache_opt = run->add_option("--cache", cache, "Memoize comparisons (bubblesort)");
  auto* k_opt = run->add_option("--k", k, "Top-k cutoff");
  auto* seed_opt = run->add_option("--seed", seed, "Master seed for synthetic datasets");
  auto* format_opt = run->add_option("--format", format, "csv | jsonl");
  auto* out_opt = run->add_option("--out", out, "Report path (stdout if unset)");

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic run file and qrels");
  std::size_t queries = 1, n = prpsort::kDefaultDepth;
  std::uint64_t synth_seed = 0;
  std::string synth_out, qrels_out;
  synth->add_option("--queries", queries, "Number of queries")->required();
  synth->add_option("--n", n, "Candidates per query")->required();
  synth->add_option("--seed", synth_seed, "Master seed")->required();
  synth->add_option("--out", synth_out, "Run file path")->required();
  synth->add_option("--qrels", qrels_out, "Qrels path (default: <out>.qrels)");

  app.add_subcommand("version", "Print the version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("version")) {
      std::cout << "prp-sort " << prpsort::kVersion << '\n';
      return 0;
    }
    if (app.got_subcommand("synth")) {
      const prpsort::Dataset ds = prpsort::generate_synthetic(queries, n, synth_seed);
      if (qrels_out.empty()) qrels_out = synth_out + ".qrels";
      std::ofstream run_file(synth_out, std::ios::binary);
      std::ofstream qrels_file(qrels_out, std::ios::binary);
      if (!run_file || !qrels_file) {
        throw prpsort::Error(prpsort::ErrorCode::kIoError, "cannot write synth output");
      }
      prpsort::write_run(run_file, ds);
      prpsort::write_qrels(qrels_file, ds);
      return 0;
    }

    prpsort::ExperimentConfig config = prpsort::load_config(config_path);
    prpsort::ConfigOverrides overrides;
    set_if(algo_opt, overrides.algorithm, algo);
    set_if(batch_opt, overrides.batch_size, batch_size);
    set_if(pivot_opt, overrides.pivot, pivot);
    set_if(cache_opt, overrides.cache, cache);
    set_if(k_opt, overrides.k, k);
    set_if(seed_opt, overrides.seed, seed);
    set_if(format_opt, overrides.format, format);
    set_if(out_opt, overrides.out, out);
    prpsort::apply_overrides(config, overrides);

    const prpsort::ExperimentReport report = prpsort::run_experiment(config);
    if (config.out_path.empty()) {
      prpsort::write_report(std::cout, report, config.format);
    } else {
      prpsort::emit_report(report, config.format, config.out_path);
    }
    return 0;
  } catch (const prpsort::Error& e) {
    std::cerr << "prp-sort: " << e.what() << '\n';
    return 1;
  }
}
