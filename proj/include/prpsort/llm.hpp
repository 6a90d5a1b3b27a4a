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

// Pairwise ranking prompts and an HTTP text-completion client.
//
// Wire format (OpenAI-style completions):
//   POST {base_url}{path}
//   Authorization: Bearer $api_key_env           (only if the variable is set)
//   {"model": M, "prompt": [p0, p1, ...], "max_tokens": T, "temperature": 0}
// The response must carry "choices": [{"index": i, "text": "..."}, ...] with
// one choice per prompt. With `multi_prompt = false` each prompt is sent as
// its own concurrent request ("prompt": "<p>") and the set still counts as a
// single logical inference call.

#ifndef PRPSORT_LLM_HPP_
#define PRPSORT_LLM_HPP_

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "prpsort/core.hpp"
#include "prpsort/oracle.hpp"

namespace prpsort {

inline constexpr std::string_view kDefaultPromptTemplate =
    "Given a query \"{query}\", which of the following two passages is more "
    "relevant to the query?\n\nPassage A: \"{passage_a}\"\n\nPassage B: "
    "\"{passage_b}\"\n\nOutput Passage A or Passage B:";

struct LlmEndpoint {
  std::string base_url;
  std::string path = "/v1/completions";
  std::string model;
  /// Name of the environment variable holding the API key.
  std::string api_key_env = "PRP_SORT_API_KEY";
  double timeout_seconds = 60.0;
  std::string prompt_template = std::string(kDefaultPromptTemplate);
  int max_tokens = 8;
  /// 0 or 1 extra attempts after a transport failure.
  int retries = 1;
  bool multi_prompt = true;
};

/// Substitutes {query}, {passage_a} and {passage_b}. Throws kMissingText if
/// either candidate has no text.
std::string build_prp_prompt(std::string_view tmpl, std::string_view query, const Candidate& a,
                             const Candidate& b);

struct ParsedLabel {
  Preference preference;
  bool fallback;
};

/// Finds the first "Passage A" / "Passage B" label (case-insensitive).
/// Output with neither label falls back to kFirst.
ParsedLabel parse_label(std::string_view completion);

class LlmClient {
 public:
  explicit LlmClient(LlmEndpoint endpoint);

  /// One logical inference call. Throws kBackendFailure on transport or
  /// protocol errors. Safe to call concurrently.
  std::vector<Preference> compare_batch(std::span<const std::string> prompts) const;

  const LlmEndpoint& endpoint() const noexcept { return endpoint_; }
  std::uint64_t parse_fallbacks() const noexcept { return fallbacks_.load(); }

 private:
  std::vector<std::string> complete(std::span<const std::string> prompts) const;

  LlmEndpoint endpoint_;
  mutable std::atomic<std::uint64_t> fallbacks_{0};
};

using CandidateMap = std::unordered_map<DocId, Candidate, DocIdHash>;

/// Oracle backed by an LLM: request (first, second) renders first as
/// Passage A and second as Passage B.
class LlmOracle final : public Oracle {
 public:
  LlmOracle(std::shared_ptr<const LlmClient> client, std::string query, CandidateMap candidates);

  Preference compare(const ComparisonRequest& req) override;
  std::vector<Preference> compare_batch(std::span<const ComparisonRequest> reqs) override;

 private:
  std::string render(const ComparisonRequest& req) const;

  std::shared_ptr<const LlmClient> client_;
  std::string query_;
  CandidateMap candidates_;
};

}  // namespace prpsort

#endif  // PRPSORT_LLM_HPP_
