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

#include "pdlab/agent/http_backend.hpp"

#include <cstdlib>

#include "httplib.h"
#include "json.hpp"
#include "pdlab/error.hpp"

namespace pdlab::agent {

HttpChatBackend::HttpChatBackend(HttpBackendConfig config) : config_(std::move(config)) {
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
  }
}

std::string HttpChatBackend::send(const CompletionRequest& request) {
  using nlohmann::json;

  json body = {{"model", config_.model}};
  json messages = json::array();
  if (!request.system_prompt.empty()) messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
  messages.push_back({{"role", "user"}, {"content", request.prompt}});
  body["messages"] = std::move(messages);

  json params = json::parse(request.params_json.empty() ? "{}" : request.params_json, nullptr, false);
  if (params.is_discarded() || !params.is_object()) {
    throw Error(Errc::InvalidArgument, "backend params must be a JSON object");
  }
  for (auto& [k, v] : params.items()) body[k] = v;

  httplib::Client client(config_.base_url);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(request.timeout).count();
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(request.timeout).count() % 1'000'000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = client.Post(config_.path, headers, body.dump(), "application/json");
  if (!res) throw TransportError("request to " + config_.base_url + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw TransportError("HTTP " + std::to_string(res->status) + " from " + config_.base_url);
  }

  json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) throw TransportError("reply is not JSON");
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw TransportError("reply lacks choices[0].message.content");
  }
}

}  // namespace pdlab::agent
