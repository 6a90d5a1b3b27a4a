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

#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "prpsort/log.hpp"

using namespace prpsort;
using json = nlohmann::json;

namespace {

// Minimal completions endpoint on 127.0.0.1. The reply for each prompt is
// produced by `answer`; `fail_first` 5xx responses are sent before that.
class FakeServer {
 public:
  explicit FakeServer(std::function<std::string(const std::string&)> answer, int fail_first = 0)
      : answer_(std::move(answer)), fail_remaining_(fail_first) {
    server_.Post("/v1/completions", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      ++requests_;
      auth_headers_.push_back(req.get_header_value("Authorization"));
      if (fail_remaining_ > 0) {
        --fail_remaining_;
        res.status = 503;
        return;
      }
      const json body = json::parse(req.body);
      bodies_.push_back(body);
      json choices = json::array();
      if (body["prompt"].is_array()) {
        // Reverse the order to make sure the client honours "index".
        for (std::size_t i = body["prompt"].size(); i-- > 0;) {
          choices.push_back({{"index", i}, {"text", answer_(body["prompt"][i])}});
        }
      } else {
        choices.push_back({{"index", 0}, {"text", answer_(body["prompt"])}});
      }
      res.set_content(json{{"choices", choices}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int requests() {
    std::lock_guard lock(mu_);
    return requests_;
  }
  std::vector<json> bodies() {
    std::lock_guard lock(mu_);
    return bodies_;
  }
  std::vector<std::string> auth_headers() {
    std::lock_guard lock(mu_);
    return auth_headers_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::function<std::string(const std::string&)> answer_;
  std::mutex mu_;
  int fail_remaining_;
  int requests_ = 0;
  std::vector<json> bodies_;
  std::vector<std::string> auth_headers_;
};

// Prefers the passage whose text sorts later, e.g. "p9" over "p1".
std::string judge_by_text(const std::string& prompt) {
  const auto a = prompt.find("Passage A: \"") + 12;
  const auto b = prompt.find("Passage B: \"") + 12;
  const std::string ta = prompt.substr(a, prompt.find('"', a) - a);
  const std::string tb = prompt.substr(b, prompt.find('"', b) - b);
  return ta > tb ? " Passage A" : " Passage B";
}

Candidate cand(const std::string& id, std::string text) {
  return Candidate{DocId(id), std::move(text), std::nullopt};
}

CandidateMap three_candidates() {
  CandidateMap m;
  for (const auto& [id, text] : {std::pair{"d1", "p1"}, {"d2", "p5"}, {"d3", "p9"}}) {
    m.emplace(DocId(id), cand(id, text));
  }
  return m;
}

LlmEndpoint endpoint_for(const FakeServer& server) {
  LlmEndpoint ep;
  ep.base_url = server.url();
  ep.model = "test-model";
  ep.timeout_seconds = 5;
  ep.api_key_env = "PRPSORT_TEST_KEY_UNSET";
  return ep;
}

struct CapturedWarnings {
  CapturedWarnings() {
    previous = set_warning_sink([this](std::string_view msg) {
      std::lock_guard lock(mu);
      lines.emplace_back(msg);
    });
  }
  ~CapturedWarnings() { set_warning_sink(previous); }
  std::mutex mu;
  std::vector<std::string> lines;
  WarningSink previous;
};

}  // namespace

TEST_CASE("parse_label reads the first passage label") {
  CHECK(parse_label("Passage A").preference == Preference::kFirst);
  CHECK(parse_label("  passage b.").preference == Preference::kSecond);
  CHECK(parse_label("PASSAGE B is better than Passage A").preference == Preference::kSecond);
  CHECK_FALSE(parse_label("Passage A").fallback);
  const ParsedLabel none = parse_label("I cannot decide");
  CHECK(none.fallback);
  CHECK(none.preference == Preference::kFirst);
  CHECK(parse_label("Passage AB").fallback);
}

TEST_CASE("build_prp_prompt substitutes query and both passages") {
  const std::string p = build_prp_prompt("{query}|{passage_a}|{passage_b}", "q",
                                         cand("d1", "alpha"), cand("d2", "beta"));
  CHECK(p == "q|alpha|beta");
  const std::string def =
      build_prp_prompt(kDefaultPromptTemplate, "what is x", cand("d1", "x is y"), cand("d2", "z"));
  CHECK(def.find("Passage A: \"x is y\"") != std::string::npos);
  CHECK(def.find("Passage B: \"z\"") != std::string::npos);
  CHECK(def.find("\"what is x\"") != std::string::npos);
}

TEST_CASE("build_prp_prompt requires passage text") {
  Candidate no_text{DocId("d1"), std::nullopt, std::nullopt};
  try {
    build_prp_prompt(kDefaultPromptTemplate, "q", no_text, cand("d2", "t"));
    FAIL("expected MissingText");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingText);
  }
}

TEST_CASE("client validates its endpoint") {
  CHECK_THROWS_AS(LlmClient(LlmEndpoint{}), Error);
  LlmEndpoint ep;
  ep.base_url = "http://127.0.0.1:1";
  ep.retries = 2;
  CHECK_THROWS_AS(LlmClient{ep}, Error);
  ep.retries = 1;
  ep.timeout_seconds = 0;
  CHECK_THROWS_AS(LlmClient{ep}, Error);
}

TEST_CASE("a batch goes out as one multi-prompt request") {
  FakeServer server(judge_by_text);
  auto client = std::make_shared<const LlmClient>(endpoint_for(server));
  LlmOracle oracle(client, "query", three_candidates());
  const std::vector<ComparisonRequest> reqs = {
      {DocId("d1"), DocId("d2")}, {DocId("d3"), DocId("d2")}, {DocId("d1"), DocId("d3")}};
  const auto out = oracle.compare_batch(reqs);
  CHECK(out == std::vector{Preference::kSecond, Preference::kFirst, Preference::kSecond});
  CHECK(server.requests() == 1);
  const json body = server.bodies().front();
  CHECK(body["model"] == "test-model");
  CHECK(body["prompt"].size() == 3);
  CHECK(body["temperature"] == 0);
}

TEST_CASE("single-prompt mode sends concurrent requests") {
  FakeServer server(judge_by_text);
  LlmEndpoint ep = endpoint_for(server);
  ep.multi_prompt = false;
  LlmOracle oracle(std::make_shared<const LlmClient>(ep), "query", three_candidates());
  const std::vector<ComparisonRequest> reqs = {{DocId("d2"), DocId("d1")},
                                               {DocId("d2"), DocId("d3")}};
  CHECK(oracle.compare_batch(reqs) == std::vector{Preference::kFirst, Preference::kSecond});
  CHECK(server.requests() == 2);
  CHECK(server.bodies()[0]["prompt"].is_string());
}

TEST_CASE("unparseable completions fall back to the first passage with a warning") {
  CapturedWarnings warnings;
  FakeServer server([](const std::string&) { return "no idea"; });
  auto client = std::make_shared<const LlmClient>(endpoint_for(server));
  LlmOracle oracle(client, "query", three_candidates());
  CHECK(oracle.compare({DocId("d1"), DocId("d3")}) == Preference::kFirst);
  CHECK(client->parse_fallbacks() == 1);
  REQUIRE(warnings.lines.size() == 1);
  CHECK(warnings.lines[0].find("ParseFallback") != std::string::npos);
}

TEST_CASE("a server error is retried once") {
  FakeServer server(judge_by_text, 1);
  LlmOracle oracle(std::make_shared<const LlmClient>(endpoint_for(server)), "q",
                   three_candidates());
  CHECK(oracle.compare({DocId("d3"), DocId("d1")}) == Preference::kFirst);
  CHECK(server.requests() == 2);
}

TEST_CASE("persistent server errors become BackendFailure") {
  FakeServer server(judge_by_text, 5);
  LlmEndpoint ep = endpoint_for(server);
  ep.retries = 0;
  LlmOracle oracle(std::make_shared<const LlmClient>(ep), "q", three_candidates());
  try {
    oracle.compare({DocId("d3"), DocId("d1")});
    FAIL("expected BackendFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBackendFailure);
  }
  CHECK(server.requests() == 1);
}

TEST_CASE("an unreachable endpoint becomes BackendFailure") {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  LlmEndpoint ep;
  ep.base_url = "http://127.0.0.1:" + std::to_string(port);
  ep.timeout_seconds = 2;
  LlmOracle oracle(std::make_shared<const LlmClient>(ep), "q", three_candidates());
  try {
    oracle.compare({DocId("d1"), DocId("d2")});
    FAIL("expected BackendFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBackendFailure);
  }
}

TEST_CASE("the API key is sent as a bearer token when the variable is set") {
  FakeServer server(judge_by_text);
  LlmEndpoint ep = endpoint_for(server);
  ep.api_key_env = "PRPSORT_TEST_API_KEY";
  ::setenv("PRPSORT_TEST_API_KEY", "secret-123", 1);
  LlmOracle oracle(std::make_shared<const LlmClient>(ep), "q", three_candidates());
  oracle.compare({DocId("d1"), DocId("d2")});
  ::unsetenv("PRPSORT_TEST_API_KEY");
  oracle.compare({DocId("d1"), DocId("d2")});
  const auto headers = server.auth_headers();
  REQUIRE(headers.size() == 2);
  CHECK(headers[0] == "Bearer secret-123");
  CHECK(headers[1].empty());
}

TEST_CASE("unknown candidates are rejected before any request") {
  FakeServer server(judge_by_text);
  LlmOracle oracle(std::make_shared<const LlmClient>(endpoint_for(server)), "q",
                   three_candidates());
  CHECK_THROWS_AS(oracle.compare({DocId("d1"), DocId("zz")}), Error);
  CHECK(server.requests() == 0);
}
