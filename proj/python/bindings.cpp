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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "prpsort/algorithms.hpp"
#include "prpsort/config.hpp"
#include "prpsort/core.hpp"
#include "prpsort/dataset.hpp"
#include "prpsort/experiment.hpp"
#include "prpsort/metrics.hpp"
#include "prpsort/oracle.hpp"
#include "prpsort/report.hpp"
#include "prpsort/version.hpp"

namespace py = pybind11;
using namespace prpsort;

namespace {

std::vector<DocId> to_ids(const std::vector<std::string>& ids) { return {ids.begin(), ids.end()}; }

std::vector<std::string> to_strings(const std::vector<DocId>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(id.str());
  return out;
}

AlgoConfig algo_config(const std::string& algorithm, std::size_t k, std::size_t batch_size,
                       const std::string& pivot, std::uint64_t pivot_seed, bool cache,
                       bool partial) {
  AlgoConfig c;
  c.algorithm = parse_algorithm(algorithm);
  c.k = k;
  c.batch_size = batch_size;
  c.pivot = PivotStrategy{parse_pivot(pivot), pivot_seed};
  c.use_cache = cache;
  c.partial = partial;
  return c;
}

// Calls back into Python for every comparison; the callable returns True when
// its first argument is the more relevant one.
class PythonOracle final : public Oracle {
 public:
  explicit PythonOracle(std::function<bool(const std::string&, const std::string&)> fn)
      : fn_(std::move(fn)) {}
  Preference compare(const ComparisonRequest& req) override {
    return fn_(req.first.str(), req.second.str()) ? Preference::kFirst : Preference::kSecond;
  }

 private:
  std::function<bool(const std::string&, const std::string&)> fn_;
};

py::tuple run_result(const RunResult& r) {
  return py::make_tuple(to_strings(r.ranking.ordered), r.ledger);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Instrumented top-k sorting with a pairwise comparison oracle";
  m.attr("__version__") = std::string(kVersion);

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<CostLedger>(m, "CostLedger")
      .def(py::init<>())
      .def(py::init([](std::uint64_t c, std::uint64_t i, std::uint64_t h, std::uint64_t g) {
             return CostLedger{c, i, h, g};
           }),
           py::arg("comparisons") = 0, py::arg("inference_calls") = 0, py::arg("cache_hits") = 0,
           py::arg("batch_groups") = 0)
      .def_readwrite("comparisons", &CostLedger::comparisons)
      .def_readwrite("inference_calls", &CostLedger::inference_calls)
      .def_readwrite("cache_hits", &CostLedger::cache_hits)
      .def_readwrite("batch_groups", &CostLedger::batch_groups)
      .def("merge", &ledger_merge)
      .def("__eq__", [](const CostLedger& a, const CostLedger& b) { return a == b; })
      .def("__repr__", [](const CostLedger& l) {
        std::ostringstream s;
        s << "CostLedger(" << l << ")";
        return s.str();
      });

  m.def(
      "canonical_pair",
      [](const std::string& a, const std::string& b) {
        const PairKey key = canonical_pair(DocId(a), DocId(b));
        return std::make_tuple(key.lo.str(), key.hi.str(), key.flipped);
      },
      py::arg("a"), py::arg("b"), "Returns (lo, hi, flipped) for the unordered pair {a, b}.");

  m.def(
      "rank_by_score",
      [](const std::vector<std::string>& ids, const std::map<std::string, double>& scores,
         const std::string& algorithm, std::size_t k, std::size_t batch_size,
         const std::string& pivot, std::uint64_t pivot_seed, bool cache, bool partial,
         double flip_probability, std::uint64_t noise_seed, const std::string& noise) {
        ScoreMap map;
        for (const auto& [id, s] : scores) map.emplace(DocId(id), s);
        std::unique_ptr<Oracle> oracle = std::make_unique<ScoreOracle>(std::move(map));
        if (flip_probability > 0.0) {
          NoiseMode mode = NoiseMode::kPerPair;
          if (noise == "event") {
            mode = NoiseMode::kPerEvent;
          } else if (noise != "pair") {
            throw Error(ErrorCode::kInvalidConfig, "noise must be 'pair' or 'event'");
          }
          oracle =
              std::make_unique<NoisyOracle>(std::move(oracle), flip_probability, noise_seed, mode);
        }
        const auto items = to_ids(ids);
        return run_result(run_algorithm(
            items, algo_config(algorithm, k, batch_size, pivot, pivot_seed, cache, partial),
            *oracle));
      },
      py::arg("ids"), py::arg("scores"), py::arg("algorithm") = "quicksort", py::arg("k") = 10,
      py::arg("batch_size") = 1, py::arg("pivot") = "median3", py::arg("pivot_seed") = 0,
      py::arg("cache") = false, py::arg("partial") = true, py::arg("flip_probability") = 0.0,
      py::arg("noise_seed") = 0, py::arg("noise") = "pair",
      "Top-k of `ids` under a score oracle (optionally noisy). Returns (ranking, ledger).");

  m.def(
      "rank_with",
      [](const std::vector<std::string>& ids,
         std::function<bool(const std::string&, const std::string&)> prefer_first,
         const std::string& algorithm, std::size_t k, std::size_t batch_size,
         const std::string& pivot, std::uint64_t pivot_seed, bool cache, bool partial) {
        PythonOracle oracle(std::move(prefer_first));
        const auto items = to_ids(ids);
        return run_result(run_algorithm(
            items, algo_config(algorithm, k, batch_size, pivot, pivot_seed, cache, partial),
            oracle));
      },
      py::arg("ids"), py::arg("prefer_first"), py::arg("algorithm") = "quicksort",
      py::arg("k") = 10, py::arg("batch_size") = 1, py::arg("pivot") = "median3",
      py::arg("pivot_seed") = 0, py::arg("cache") = false, py::arg("partial") = true,
      "Top-k of `ids` judged by prefer_first(a, b) -> bool. Returns (ranking, ledger).");

  m.def(
      "ndcg",
      [](const std::vector<std::string>& ranking, const std::map<std::string, int>& grades,
         std::size_t k) {
        RelevanceMap map;
        for (const auto& [doc, g] : grades) map.set("q", DocId(doc), g);
        const auto ids = to_ids(ranking);
        return ndcg_at_k(ids, map, "q", k);
      },
      py::arg("ranking"), py::arg("grades"), py::arg("k") = 10);

  m.def(
      "aggregate",
      [](const std::vector<double>& values) {
        const CostStats s = aggregate(values);
        return std::make_tuple(s.mean, s.sd, s.n);
      },
      py::arg("values"), "Returns (mean, population sd, n).");

  m.def("percent_gain", &percent_gain, py::arg("baseline"), py::arg("optimized"));

  m.def(
      "generate_synthetic",
      [](std::size_t queries, std::size_t n, std::uint64_t seed) {
        const Dataset ds = generate_synthetic(queries, n, seed);
        py::list out;
        for (const auto& q : ds.queries) {
          py::dict scores, grades;
          for (const auto& c : q.candidates) {
            scores[py::str(c.doc.str())] = ds.ground_truth.at(q.id).at(c.doc);
            grades[py::str(c.doc.str())] = ds.grades->grade(q.id, c.doc);
          }
          py::dict entry;
          entry["id"] = q.id;
          entry["docs"] = to_strings(q.doc_ids());
          entry["scores"] = scores;
          entry["grades"] = grades;
          out.append(entry);
        }
        return out;
      },
      py::arg("queries"), py::arg("n"), py::arg("seed"),
      "List of {id, docs, scores, grades} dicts, one per query.");

  m.def(
      "run_experiment",
      [](const std::string& config_json, const std::string& format) {
        const ExperimentConfig config = parse_config(config_json);
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = run_experiment(config);
        }
        std::ostringstream out;
        write_report(out, report, parse_format(format));
        return out.str();
      },
      py::arg("config_json"), py::arg("format") = "csv",
      "Runs an experiment from JSON config text and returns the report text.");
}
