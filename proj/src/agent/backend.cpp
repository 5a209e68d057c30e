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

#include "pdlab/agent/backend.hpp"

#include <cmath>
#include <thread>

#include "pdlab/error.hpp"

namespace pdlab::agent {

std::string complete(Backend& backend, const CompletionRequest& request, const CompletionLogger& logger,
                     const RetryPolicy& policy) {
  if (request.timeout.count() <= 0) throw Error(Errc::InvalidArgument, "completion timeout must be positive");
  if (request.max_retries < 0) throw Error(Errc::InvalidArgument, "retry budget must be non-negative");

  std::string last_error;
  const int attempts = 1 + request.max_retries;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    CompletionAttempt record{backend.id(), request.caller_id, attempt, request.system_prompt, request.prompt, {}, {}};
    const auto started = std::chrono::steady_clock::now();
    try {
      std::string text = backend.send(request);
      if (std::chrono::steady_clock::now() - started > request.timeout) throw TransportError("completion timed out");
      record.response = text;
      if (logger) logger(record);
      return text;
    } catch (const TransportError& e) {
      last_error = e.what();
      record.error = last_error;
      if (logger) logger(record);
    }
    if (attempt < attempts) {
      const auto delay = std::chrono::milliseconds(static_cast<std::int64_t>(
          static_cast<double>(policy.initial_backoff.count()) * std::pow(policy.multiplier, attempt - 1)));
      if (policy.sleep) {
        policy.sleep(delay);
      } else {
        std::this_thread::sleep_for(delay);
      }
    }
  }
  throw Error(Errc::BackendUnavailable,
              backend.id() + " failed " + std::to_string(attempts) + " attempts: " + last_error);
}

}  // namespace pdlab::agent
