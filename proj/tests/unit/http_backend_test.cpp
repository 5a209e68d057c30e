// Copyright 2026 The pdlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdlib>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "pdlab/agent/http_backend.hpp"
#include "test_util.hpp"

using namespace pdlab;
using namespace pdlab::agent;
using nlohmann::json;
using pdlab::testing::throws_code;

namespace {

struct LocalServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;

  LocalServer() = default;
  void start() {
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LocalServer() {
    server.stop();
    if (thread.joinable()) thread.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

}  // namespace

TEST_CASE("http backend speaks the chat completion wire format") {
  LocalServer local;
  json seen;
  std::string auth;
  local.server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(json{{"choices", {{{"message", {{"role", "assistant"}, {"content", "STEP 4: <选A>"}}}}}}}.dump(),
                    "application/json");
  });
  local.start();

  ::setenv("PDLAB_TEST_KEY", "sk-test", 1);
  HttpBackendConfig cfg;
  cfg.base_url = local.url();
  cfg.api_key_env = "PDLAB_TEST_KEY";
  HttpChatBackend backend(cfg);

  CompletionRequest req;
  req.system_prompt = "sys";
  req.prompt = "user";
  req.params_json = R"({"temperature": 0.7, "max_tokens": 64})";
  CHECK(backend.send(req) == "STEP 4: <选A>");
  CHECK(seen["model"] == "gpt-4-0613");
  CHECK(seen["temperature"] == 0.7);
  CHECK(seen["max_tokens"] == 64);
  REQUIRE(seen["messages"].size() == 2);
  CHECK(seen["messages"][0]["role"] == "system");
  CHECK(seen["messages"][0]["content"] == "sys");
  CHECK(seen["messages"][1]["role"] == "user");
  CHECK(seen["messages"][1]["content"] == "user");
  CHECK(auth == "Bearer sk-test");

  req.params_json = "[1,2]";
  CHECK(throws_code([&] { backend.send(req); }, Errc::InvalidArgument));
}

TEST_CASE("http failures surface as transport errors and are retried") {
  LocalServer local;
  std::atomic<int> hits{0};
  local.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    if (++hits < 3) {
      res.status = 503;
      return;
    }
    res.set_content(R"({"choices":[{"message":{"content":"I DECIDE TO CHOOSE A"}}]})", "application/json");
  });
  local.server.Post("/malformed", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"nothing":true})", "application/json");
  });
  local.start();

  HttpBackendConfig cfg;
  cfg.base_url = local.url();
  cfg.api_key_env.clear();
  HttpChatBackend backend(cfg);
  CompletionRequest req;
  req.prompt = "decide";
  RetryPolicy fast;
  fast.sleep = [](std::chrono::milliseconds) {};
  int attempts = 0;
  CHECK(complete(backend, req, [&](const CompletionAttempt&) { ++attempts; }, fast) == "I DECIDE TO CHOOSE A");
  CHECK(attempts == 3);

  cfg.path = "/malformed";
  HttpChatBackend bad(cfg);
  CHECK_THROWS_AS(bad.send(req), TransportError);

  HttpBackendConfig down;
  down.base_url = "http://127.0.0.1:1";
  down.api_key_env.clear();
  HttpChatBackend unreachable(down);
  req.timeout = std::chrono::milliseconds{500};
  CHECK_THROWS_AS(unreachable.send(req), TransportError);
}
