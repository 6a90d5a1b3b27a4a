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

// Report emission. CSV columns, in order:
//
//   kind, dataset, query_id, label, algorithm, batch_size, pivot, cached,
//   partial, k, status, comparisons, inference_calls, cache_hits,
//   batch_groups, ndcg, n, failures, mean_comparisons, sd_comparisons,
//   mean_inference_calls, sd_inference_calls, mean_cache_hits, mean_ndcg,
//   baseline, gain_percent, error
//
// `kind` is "query", "aggregate" or "gain"; fields that do not apply to a
// kind are left empty. Reals carry 4 decimals. JSON lines use the same key
// names and omit fields that do not apply.

#ifndef PRPSORT_REPORT_HPP_
#define PRPSORT_REPORT_HPP_

#include <array>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string_view>

#include "prpsort/experiment.hpp"

namespace prpsort {

inline constexpr std::array<std::string_view, 27> kReportColumns = {"kind",
                                                                    "dataset",
                                                                    "query_id",
                                                                    "label",
                                                                    "algorithm",
                                                                    "batch_size",
                                                                    "pivot",
                                                                    "cached",
                                                                    "partial",
                                                                    "k",
                                                                    "status",
                                                                    "comparisons",
                                                                    "inference_calls",
                                                                    "cache_hits",
                                                                    "batch_groups",
                                                                    "ndcg",
                                                                    "n",
                                                                    "failures",
                                                                    "mean_comparisons",
                                                                    "sd_comparisons",
                                                                    "mean_inference_calls",
                                                                    "sd_inference_calls",
                                                                    "mean_cache_hits",
                                                                    "mean_ndcg",
                                                                    "baseline",
                                                                    "gain_percent",
                                                                    "error"};

/// Throws kAggregateMismatch if aggregate or gain rows disagree with the
/// statistics recomputed from the per-query rows.
void check_consistency(const ExperimentReport& report);

void write_report(std::ostream& out, const ExperimentReport& report, ReportFormat format);
void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path);

/// Parses a report written by write_report. Values come back at the emitted
/// precision.
ExperimentReport read_report(std::istream& in, ReportFormat format);

ReportFormat parse_format(std::string_view name);

}  // namespace prpsort

#endif  // PRPSORT_REPORT_HPP_
