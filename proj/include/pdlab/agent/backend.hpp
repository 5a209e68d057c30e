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

#include <chrono>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace pdlab::agent {

struct CompletionRequest {
  std::string system_prompt;
  std::string prompt;
  // Opaque backend parameters as a JSON object text, forwarded untouched.
  std::string params_json = "{}";
  std::chrono::milliseconds timeout{60'000};
  int max_retries = 2;
  // Identifies the calling agent in logs; backends may use it for routing.
  std::string caller_id;
};

// Thrown by adapters for failures worth retrying (network, HTTP 5xx/429, timeouts).
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adapter interface: send {prompt, params}, receive text.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string id() const = 0;
  virtual std::string send(const CompletionRequest& request) = 0;
};

struct CompletionAttempt {
  std::string backend_id;
  std::string caller_id;
  int attempt = 1;
  std::string system_prompt;
  std::string prompt;
  std::optional<std::string> response;
  std::string error;  // empty on success
};

using CompletionLogger = std::function<void(const CompletionAttempt&)>;

struct RetryPolicy {
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  // Injected so tests and simulated clocks do not actually sleep.
  std::function<void(std::chrono::milliseconds)> sleep;
};

// Calls backend.send up to 1 + request.max_retries times with exponential
// backoff between attempts. A response arriving after request.timeout counts
// as a failed attempt. Every attempt is reported to logger. Throws
// Error{BackendUnavailable} once attempts are exhausted and
// Error{InvalidArgument} for a non-positive timeout or negative retry budget.
std::string complete(Backend& backend, const CompletionRequest& request, const CompletionLogger& logger = {},
                     const RetryPolicy& policy = {});

}  // namespace pdlab::agent
