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

#include "prpsort/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "prpsort/log.hpp"
#include "prpsort/seed.hpp"

namespace prpsort {

std::vector<DocId> QueryCandidates::doc_ids() const {
  std::vector<DocId> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(c.doc);
  return out;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kFormatError,
                std::string("invalid ") + what + " '" + std::string(field) + "'", line);
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return in;
}

}  // namespace

std::vector<QueryCandidates> parse_run(std::istream& in, std::size_t depth) {
  struct Entry {
    long long rank;
    std::size_t order;
    Candidate candidate;
  };
  std::vector<std::string> query_order;
  std::unordered_map<std::string, std::vector<Entry>> by_query;
  std::set<std::pair<std::string, std::string>> seen;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() != 6) {
      throw Error(ErrorCode::kFormatError,
                  "expected 6 columns, found " + std::to_string(fields.size()), line_no);
    }
    if (fields[1] != "Q0") {
      throw Error(ErrorCode::kFormatError, "second column must be Q0", line_no);
    }
    std::string qid(fields[0]);
    std::string doc(fields[2]);
    const auto rank = parse_number<long long>(fields[3], line_no, "rank");
    const auto score = parse_number<double>(fields[4], line_no, "score");
    if (!seen.emplace(qid, doc).second) {
      throw Error(ErrorCode::kFormatError, "duplicate document " + doc + " for query " + qid,
                  line_no);
    }
    auto [it, inserted] = by_query.try_emplace(qid);
    if (inserted) query_order.push_back(qid);
    it->second.push_back(
        Entry{rank, it->second.size(), Candidate{DocId(std::move(doc)), std::nullopt, score}});
  }
  if (in.bad()) throw Error(ErrorCode::kIoError, "read error");

  std::vector<QueryCandidates> out;
  out.reserve(query_order.size());
  for (const auto& qid : query_order) {
    auto& entries = by_query[qid];
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.rank < b.rank; });
    if (depth > 0 && entries.size() > depth) entries.resize(depth);
    QueryCandidates q{qid, std::nullopt, {}};
    q.candidates.reserve(entries.size());
    for (auto& e : entries) q.candidates.push_back(std::move(e.candidate));
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<QueryCandidates> load_run_file(const std::filesystem::path& path, std::size_t depth) {
  auto in = open_input(path);
  return parse_run(in, depth);
}

RelevanceMap parse_qrels(std::istream& in) {
  RelevanceMap grades;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() != 4) {
      throw Error(ErrorCode::kFormatError,
                  "expected 4 columns, found " + std::to_string(fields.size()), line_no);
    }
    int grade = parse_number<int>(fields[3], line_no, "grade");
    if (grade < 0) {
      warn("qrels line " + std::to_string(line_no) + ": negative grade " + std::to_string(grade) +
           " clamped to 0");
      grade = 0;
    }
    grades.set(std::string(fields[0]), DocId(std::string(fields[2])), grade);
  }
  if (in.bad()) throw Error(ErrorCode::kIoError, "read error");
  return grades;
}

RelevanceMap load_qrels(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_qrels(in);
}

std::map<std::string, std::string> load_texts(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorCode::kFormatError, "expected id<TAB>text", line_no);
    }
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

std::uint64_t synthetic_query_seed(std::uint64_t master_seed, std::size_t index) {
  return mix_seed(master_seed, static_cast<std::uint64_t>(index) + 1);
}

Dataset generate_synthetic(std::size_t num_queries, std::size_t n, std::uint64_t master_seed) {
  if (num_queries == 0 || n == 0) {
    throw Error(ErrorCode::kInvalidConfig, "synthetic datasets need queries >= 1 and n >= 1");
  }
  const std::size_t width = std::to_string(n).size();
  Dataset ds;
  ds.name = "synthetic";
  ds.grades.emplace();
  ds.queries.reserve(num_queries);

  for (std::size_t qi = 0; qi < num_queries; ++qi) {
    std::mt19937_64 rng(synthetic_query_seed(master_seed, qi));
    // steps[j] in 1..n; candidate j scores steps[j] / n.
    std::vector<std::size_t> steps(n);
    for (std::size_t j = 0; j < n; ++j) steps[j] = j + 1;
    for (std::size_t j = n; j > 1; --j) {
      std::swap(steps[j - 1], steps[draw_index(rng, j)]);
    }

    QueryCandidates q{"q" + std::to_string(qi + 1), std::nullopt, {}};
    ScoreMap& truth = ds.ground_truth[q.id];
    for (std::size_t j = 0; j < n; ++j) {
      std::string num = std::to_string(j + 1);
      DocId doc("d" + std::string(width - num.size(), '0') + num);
      const double score = static_cast<double>(steps[j]) / static_cast<double>(n);
      const std::size_t rank = n - steps[j];  // 0 = most relevant
      int grade = 0;
      if (10 * rank < n) {
        grade = 3;
      } else if (10 * rank < 3 * n) {
        grade = 2;
      } else if (10 * rank < 6 * n) {
        grade = 1;
      }
      ds.grades->set(q.id, doc, grade);
      truth.emplace(doc, score);
      q.candidates.push_back(Candidate{std::move(doc), std::nullopt, score});
    }
    ds.queries.push_back(std::move(q));
  }
  return ds;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void write_run(std::ostream& out, const Dataset& dataset, std::string_view tag) {
  for (const auto& q : dataset.queries) {
    const ScoreMap* truth = nullptr;
    if (auto it = dataset.ground_truth.find(q.id); it != dataset.ground_truth.end()) {
      truth = &it->second;
    }
    std::size_t rank = 0;
    for (const auto& c : q.candidates) {
      double score = c.first_stage_score.value_or(0.0);
      if (truth != nullptr) {
        if (auto s = truth->find(c.doc); s != truth->end()) score = s->second;
      }
      out << q.id << " Q0 " << c.doc << ' ' << ++rank << ' ' << shortest(score) << ' ' << tag
          << '\n';
    }
  }
}

void write_qrels(std::ostream& out, const Dataset& dataset) {
  if (!dataset.grades) return;
  for (const auto& q : dataset.queries) {
    for (const auto& c : q.candidates) {
      out << q.id << " 0 " << c.doc << ' ' << dataset.grades->grade(q.id, c.doc) << '\n';
    }
  }
}

}  // namespace prpsort
