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

#include "prpsort/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace prpsort {

using ordered_json = nlohmann::ordered_json;

ReportFormat parse_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "jsonl" || name == "json-lines") return ReportFormat::kJsonLines;
  throw Error(ErrorCode::kInvalidConfig, "unknown report format '" + std::string(name) + "'");
}

// --- consistency -----------------------------------------------------------

namespace {

bool close(double a, double b) {
  return std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

bool same(const std::optional<double>& a, const std::optional<double>& b) {
  return a.has_value() == b.has_value() && (!a || close(*a, *b));
}

bool same(const std::optional<CostStats>& a, const std::optional<CostStats>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || (a->n == b->n && close(a->mean, b->mean) && close(a->sd, b->sd));
}

[[noreturn]] void mismatch(const std::string& what) {
  throw Error(ErrorCode::kAggregateMismatch, what);
}

}  // namespace

void check_consistency(const ExperimentReport& report) {
  ExperimentReport expected;
  expected.pooling = report.pooling;
  expected.queries = report.queries;
  summarize(expected);

  if (expected.aggregates.size() != report.aggregates.size()) {
    mismatch("aggregate row count differs from per-query rows");
  }
  for (std::size_t i = 0; i < expected.aggregates.size(); ++i) {
    const AggregateRow& e = expected.aggregates[i];
    const AggregateRow& r = report.aggregates[i];
    if (e.dataset != r.dataset || e.label != r.label || e.failures != r.failures ||
        !same(e.comparisons, r.comparisons) || !same(e.inference_calls, r.inference_calls) ||
        !same(e.mean_cache_hits, r.mean_cache_hits) || !same(e.mean_ndcg, r.mean_ndcg)) {
      mismatch("aggregate " + r.dataset + "/" + r.label + " disagrees with per-query rows");
    }
  }
  if (expected.gains.size() != report.gains.size()) mismatch("gain row count differs");
  for (std::size_t i = 0; i < expected.gains.size(); ++i) {
    const GainRow& e = expected.gains[i];
    const GainRow& r = report.gains[i];
    if (e.dataset != r.dataset || e.label != r.label || e.baseline != r.baseline ||
        !close(e.gain_percent, r.gain_percent)) {
      mismatch("gain " + r.dataset + "/" + r.label + " disagrees with aggregates");
    }
  }
}

// --- writing ---------------------------------------------------------------

namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

using Record = std::map<std::string_view, std::string>;

void config_fields(Record& rec, const AlgoConfig& c) {
  rec["algorithm"] = to_string(c.algorithm);
  rec["batch_size"] = std::to_string(c.batch_size);
  rec["cached"] = c.use_cache ? "true" : "false";
  if (c.algorithm == Algorithm::kQuicksort) {
    rec["pivot"] = to_string(c.pivot.kind);
    rec["partial"] = c.partial ? "true" : "false";
  }
  rec["k"] = std::to_string(c.k);
}

Record query_record(const QueryRow& row) {
  Record rec;
  rec["kind"] = "query";
  rec["dataset"] = row.dataset;
  rec["query_id"] = row.query_id;
  rec["label"] = row.label;
  config_fields(rec, row.config);
  rec["status"] = row.ok ? "ok" : "failed";
  rec["comparisons"] = std::to_string(row.ledger.comparisons);
  rec["inference_calls"] = std::to_string(row.ledger.inference_calls);
  rec["cache_hits"] = std::to_string(row.ledger.cache_hits);
  rec["batch_groups"] = std::to_string(row.ledger.batch_groups);
  if (row.ndcg) rec["ndcg"] = fixed4(*row.ndcg);
  if (!row.ok) rec["error"] = row.error;
  return rec;
}

Record aggregate_record(const AggregateRow& row) {
  Record rec;
  rec["kind"] = "aggregate";
  rec["dataset"] = row.dataset;
  rec["label"] = row.label;
  config_fields(rec, row.config);
  rec["n"] = std::to_string(row.n());
  rec["failures"] = std::to_string(row.failures);
  if (row.comparisons) {
    rec["mean_comparisons"] = fixed4(row.comparisons->mean);
    rec["sd_comparisons"] = fixed4(row.comparisons->sd);
  }
  if (row.inference_calls) {
    rec["mean_inference_calls"] = fixed4(row.inference_calls->mean);
    rec["sd_inference_calls"] = fixed4(row.inference_calls->sd);
  }
  if (row.mean_cache_hits) rec["mean_cache_hits"] = fixed4(*row.mean_cache_hits);
  if (row.mean_ndcg) rec["mean_ndcg"] = fixed4(*row.mean_ndcg);
  return rec;
}

Record gain_record(const GainRow& row) {
  Record rec;
  rec["kind"] = "gain";
  rec["dataset"] = row.dataset;
  rec["label"] = row.label;
  rec["baseline"] = row.baseline;
  rec["gain_percent"] = fixed4(row.gain_percent);
  return rec;
}

bool is_integer_column(std::string_view col) {
  return col == "batch_size" || col == "k" || col == "comparisons" || col == "inference_calls" ||
         col == "cache_hits" || col == "batch_groups" || col == "n" || col == "failures";
}

bool is_real_column(std::string_view col) {
  return col == "ndcg" || col.starts_with("mean_") || col.starts_with("sd_") ||
         col == "gain_percent";
}

void write_record(std::ostream& out, const Record& rec, ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    bool first = true;
    for (std::string_view col : kReportColumns) {
      if (!first) out << ',';
      first = false;
      if (auto it = rec.find(col); it != rec.end()) out << csv_escape(it->second);
    }
    out << '\n';
    return;
  }
  ordered_json obj = ordered_json::object();
  for (std::string_view col : kReportColumns) {
    auto it = rec.find(col);
    if (it == rec.end()) continue;
    const std::string key(col);
    if (is_integer_column(col)) {
      obj[key] = std::stoull(it->second);
    } else if (is_real_column(col)) {
      obj[key] = round4(std::stod(it->second));
    } else if (col == "cached" || col == "partial") {
      obj[key] = it->second == "true";
    } else {
      obj[key] = it->second;
    }
  }
  out << obj.dump() << '\n';
}

}  // namespace

void write_report(std::ostream& out, const ExperimentReport& report, ReportFormat format) {
  check_consistency(report);
  if (format == ReportFormat::kCsv) {
    bool first = true;
    for (std::string_view col : kReportColumns) {
      if (!first) out << ',';
      first = false;
      out << col;
    }
    out << '\n';
  }
  for (const auto& row : report.queries) write_record(out, query_record(row), format);
  for (const auto& row : report.aggregates) write_record(out, aggregate_record(row), format);
  for (const auto& row : report.gains) write_record(out, gain_record(row), format);
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  std::ostringstream buffer;
  write_report(buffer, report, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << buffer.str();
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

// --- reading ---------------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw Error(ErrorCode::kFormatError, "unterminated quote", line_no);
  out.push_back(std::move(field));
  return out;
}

class FieldReader {
 public:
  FieldReader(const Record& rec, std::size_t line) : rec_(rec), line_(line) {}

  std::string str(std::string_view col) const {
    auto it = rec_.find(col);
    return it == rec_.end() ? std::string() : it->second;
  }
  bool has(std::string_view col) const { return !str(col).empty(); }

  std::uint64_t integer(std::string_view col) const {
    const std::string s = str(col);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::kFormatError, "bad integer in " + std::string(col), line_);
    }
    return v;
  }

  double real(std::string_view col) const {
    const std::string s = str(col);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::kFormatError, "bad number in " + std::string(col), line_);
    }
    return v;
  }

  std::optional<double> optional_real(std::string_view col) const {
    if (!has(col)) return std::nullopt;
    return real(col);
  }

  AlgoConfig config() const {
    AlgoConfig c;
    c.algorithm = parse_algorithm(str("algorithm"));
    c.batch_size = integer("batch_size");
    c.use_cache = str("cached") == "true";
    c.k = integer("k");
    if (has("pivot")) c.pivot.kind = parse_pivot(str("pivot"));
    c.partial = str("partial") != "false";
    return c;
  }

 private:
  const Record& rec_;
  std::size_t line_;
};

void add_record(ExperimentReport& report, const Record& rec, std::size_t line_no) {
  const FieldReader f(rec, line_no);
  const std::string kind = f.str("kind");
  if (kind == "query") {
    QueryRow row;
    row.dataset = f.str("dataset");
    row.query_id = f.str("query_id");
    row.label = f.str("label");
    row.config = f.config();
    row.ok = f.str("status") == "ok";
    row.ledger = CostLedger{f.integer("comparisons"), f.integer("inference_calls"),
                            f.integer("cache_hits"), f.integer("batch_groups")};
    row.ndcg = f.optional_real("ndcg");
    row.error = f.str("error");
    report.queries.push_back(std::move(row));
  } else if (kind == "aggregate") {
    AggregateRow row;
    row.dataset = f.str("dataset");
    row.label = f.str("label");
    row.config = f.config();
    row.failures = f.integer("failures");
    const std::size_t n = f.integer("n");
    if (n > 0) {
      row.comparisons = CostStats{f.real("mean_comparisons"), f.real("sd_comparisons"), n};
      row.inference_calls =
          CostStats{f.real("mean_inference_calls"), f.real("sd_inference_calls"), n};
      row.mean_cache_hits = f.optional_real("mean_cache_hits");
    }
    row.mean_ndcg = f.optional_real("mean_ndcg");
    report.aggregates.push_back(std::move(row));
  } else if (kind == "gain") {
    report.gains.push_back(
        GainRow{f.str("dataset"), f.str("label"), f.str("baseline"), f.real("gain_percent")});
  } else {
    throw Error(ErrorCode::kFormatError, "unknown row kind '" + kind + "'", line_no);
  }
}

std::string json_field(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_unsigned() || value.is_number_integer()) return value.dump();
  if (value.is_number_float()) return fixed4(value.get<double>());
  return value.dump();
}

}  // namespace

ExperimentReport read_report(std::istream& in, ReportFormat format) {
  ExperimentReport report;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    Record rec;
    if (format == ReportFormat::kCsv) {
      // A quoted field may span lines; keep reading until the quotes balance.
      const std::size_t first_line = line_no;
      std::string next;
      while (std::count(line.begin(), line.end(), '"') % 2 == 1 && std::getline(in, next)) {
        ++line_no;
        line += '\n';
        line += next;
      }
      std::vector<std::string> fields = split_csv(line, first_line);
      if (header.empty()) {
        header = std::move(fields);
        continue;
      }
      if (fields.size() != header.size()) {
        throw Error(ErrorCode::kFormatError, "column count differs from header", line_no);
      }
      for (std::size_t i = 0; i < header.size(); ++i) {
        for (std::string_view col : kReportColumns) {
          if (col == header[i]) rec[col] = std::move(fields[i]);
        }
      }
    } else {
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kFormatError, e.what(), line_no);
      }
      for (std::string_view col : kReportColumns) {
        if (auto it = obj.find(std::string(col)); it != obj.end()) rec[col] = json_field(*it);
      }
    }
    add_record(report, rec, line_no);
  }
  return report;
}

}  // namespace prpsort
