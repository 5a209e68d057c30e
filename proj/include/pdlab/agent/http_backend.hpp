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

#pragma once

#include <memory>
#include <string>

#include "pdlab/agent/backend.hpp"

namespace pdlab::agent {

// Hosted chat-completion API speaking the OpenAI wire format:
// POST {base_url}{path} with {"model", "messages": [system, user], ...params}
// and reply text at choices[0].message.content.
struct HttpBackendConfig {
  std::string id = "openai";
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4-0613";
  // Name of the environment variable holding the bearer token; empty sends none.
  std::string api_key_env = "OPENAI_API_KEY";
};

class HttpChatBackend : public Backend {
 public:
  explicit HttpChatBackend(HttpBackendConfig config);

  std::string id() const override { return config_.id; }
  std::string send(const CompletionRequest& request) override;

 private:
  HttpBackendConfig config_;
  std::string api_key_;
};

}  // namespace pdlab::agent
