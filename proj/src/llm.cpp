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

#include "prpsort/llm.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <future>
#include <string>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "prpsort/log.hpp"

namespace prpsort {

using nlohmann::json;

std::string build_prp_prompt(std::string_view tmpl, std::string_view query, const Candidate& a,
                             const Candidate& b) {
  for (const Candidate* c : {&a, &b}) {
    if (!c->text) {
      throw Error(ErrorCode::kMissingText, "candidate " + c->doc.str() + " has no text");
    }
  }
  static constexpr std::string_view kQuery = "{query}";
  static constexpr std::string_view kPassageA = "{passage_a}";
  static constexpr std::string_view kPassageB = "{passage_b}";

  // Single left-to-right pass: substituted text is never rescanned.
  std::string out;
  out.reserve(tmpl.size() + query.size() + a.text->size() + b.text->size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const std::string_view rest = tmpl.substr(i);
    if (rest.starts_with(kQuery)) {
      out += query;
      i += kQuery.size();
    } else if (rest.starts_with(kPassageA)) {
      out += *a.text;
      i += kPassageA.size();
    } else if (rest.starts_with(kPassageB)) {
      out += *b.text;
      i += kPassageB.size();
    } else {
      out += tmpl[i++];
    }
  }
  return out;
}

namespace {

// Position of the first standalone "passage <label>" in lowercase `text`.
std::size_t find_label(const std::string& text, char label) {
  const std::string needle = std::string("passage ") + label;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    const std::size_t end = pos + needle.size();
    const bool word_end =
        end == text.size() || !std::isalnum(static_cast<unsigned char>(text[end]));
    const bool word_start = pos == 0 || !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
    if (word_start && word_end) return pos;
  }
  return std::string::npos;
}

}  // namespace

ParsedLabel parse_label(std::string_view completion) {
  std::string lower(completion);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const std::size_t a = find_label(lower, 'a');
  const std::size_t b = find_label(lower, 'b');
  if (a == std::string::npos && b == std::string::npos) {
    return {Preference::kFirst, true};
  }
  return {a <= b ? Preference::kFirst : Preference::kSecond, false};
}

LlmClient::LlmClient(LlmEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  if (endpoint_.base_url.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "LLM endpoint needs a base_url");
  }
  if (endpoint_.retries < 0 || endpoint_.retries > 1) {
    throw Error(ErrorCode::kInvalidConfig, "retries must be 0 or 1");
  }
  if (!(endpoint_.timeout_seconds > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "timeout_seconds must be positive");
  }
}

namespace {

// Sends one completion request and returns the choice texts ordered by index.
std::vector<std::string> post_completion(const LlmEndpoint& ep, const json& prompt,
                                         std::size_t expected) {
  httplib::Client client(ep.base_url);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(ep.timeout_seconds));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (const char* key = std::getenv(ep.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const json body = {
      {"model", ep.model}, {"prompt", prompt}, {"max_tokens", ep.max_tokens}, {"temperature", 0}};

  std::string failure;
  for (int attempt = 0; attempt <= ep.retries; ++attempt) {
    auto res = client.Post(ep.path, headers, body.dump(), "application/json");
    if (!res) {
      failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kBackendFailure, "HTTP " + std::to_string(res->status));
    }
    try {
      const json reply = json::parse(res->body);
      const json& choices = reply.at("choices");
      if (!choices.is_array() || choices.size() != expected) {
        throw Error(ErrorCode::kBackendFailure,
                    "expected " + std::to_string(expected) + " choices");
      }
      std::vector<std::string> texts(expected);
      for (std::size_t i = 0; i < choices.size(); ++i) {
        const std::size_t index = choices[i].value("index", i);
        if (index >= expected) {
          throw Error(ErrorCode::kBackendFailure, "choice index out of range");
        }
        texts[index] = choices[i].at("text").get<std::string>();
      }
      return texts;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kBackendFailure, std::string("malformed response: ") + e.what());
    }
  }
  throw Error(ErrorCode::kBackendFailure, failure);
}

}  // namespace

std::vector<std::string> LlmClient::complete(std::span<const std::string> prompts) const {
  if (prompts.empty()) return {};
  if (endpoint_.multi_prompt) {
    return post_completion(
        endpoint_, json(std::vector<std::string>(prompts.begin(), prompts.end())), prompts.size());
  }
  std::vector<std::future<std::vector<std::string>>> pending;
  pending.reserve(prompts.size());
  for (const auto& p : prompts) {
    pending.push_back(std::async(std::launch::async,
                                 [this, &p] { return post_completion(endpoint_, json(p), 1); }));
  }
  std::vector<std::string> out;
  out.reserve(prompts.size());
  for (auto& f : pending) out.push_back(std::move(f.get().front()));
  return out;
}

std::vector<Preference> LlmClient::compare_batch(std::span<const std::string> prompts) const {
  const std::vector<std::string> texts = complete(prompts);
  std::vector<Preference> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    const ParsedLabel parsed = parse_label(text);
    if (parsed.fallback) {
      fallbacks_.fetch_add(1);
      warn("ParseFallback: no passage label in completion \"" + text + "\"");
    }
    out.push_back(parsed.preference);
  }
  return out;
}

LlmOracle::LlmOracle(std::shared_ptr<const LlmClient> client, std::string query,
                     CandidateMap candidates)
    : client_(std::move(client)), query_(std::move(query)), candidates_(std::move(candidates)) {
  if (!client_) throw Error(ErrorCode::kInvalidConfig, "LLM oracle needs a client");
}

std::string LlmOracle::render(const ComparisonRequest& req) const {
  canonical_pair(req);
  auto find = [&](const DocId& id) -> const Candidate& {
    auto it = candidates_.find(id);
    if (it == candidates_.end()) {
      throw Error(ErrorCode::kUnknownDoc, "unknown candidate " + id.str());
    }
    return it->second;
  };
  return build_prp_prompt(client_->endpoint().prompt_template, query_, find(req.first),
                          find(req.second));
}

Preference LlmOracle::compare(const ComparisonRequest& req) {
  const std::string prompt = render(req);
  return client_->compare_batch(std::span<const std::string>(&prompt, 1)).front();
}

std::vector<Preference> LlmOracle::compare_batch(std::span<const ComparisonRequest> reqs) {
  std::vector<std::string> prompts;
  prompts.reserve(reqs.size());
  for (const auto& r : reqs) prompts.push_back(render(r));
  return client_->compare_batch(prompts);
}

}  // namespace prpsort
