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

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pdlab/session/export.hpp"
#include "pdlab/session/session.hpp"

namespace pdlab::session {

struct CreatedSession {
  std::string session_id;
  std::map<std::string, std::string> tokens;  // participant id -> join token
};

struct TokenBinding {
  std::shared_ptr<Session> session;
  std::string participant;
};

// Owns the live sessions of one server process. Thread-safe.
class SessionManager {
 public:
  using Clock = std::function<game::EpochMs()>;

  // Event logs go to log_dir/<session_id>.jsonl when log_dir is set.
  SessionManager(AgentExecutor& executor, std::optional<std::filesystem::path> log_dir, Clock clock,
                 std::uint64_t token_seed);

  // Throws Error{ConfigInvalid}.
  CreatedSession create(const SessionConfig& config, std::vector<std::string> roster);
  // Throws Error{UnknownSession}, or Error{IllegalEvent} if already started.
  void start(const std::string& session_id);
  nlohmann::json status(const std::string& session_id) const;
  nlohmann::json list() const;
  // Throws Error{UnknownSession} or Error{SessionIncomplete}.
  DatasetFiles export_sessions(const std::vector<std::string>& ids, const std::filesystem::path& dir) const;

  std::optional<TokenBinding> resolve(const std::string& token) const;
  std::shared_ptr<Session> find(const std::string& session_id) const;
  std::vector<std::shared_ptr<Session>> sessions() const;

  // Invoked whenever any session has new input or output.
  void set_wakeup(std::function<void()> wakeup);
  game::EpochMs now() const { return clock_(); }

 private:
  AgentExecutor& executor_;
  std::optional<std::filesystem::path> log_dir_;
  Clock clock_;
  mutable std::mutex mu_;
  std::mt19937_64 token_rng_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::map<std::string, std::pair<std::string, std::string>> tokens_;  // token -> (session, participant)
  std::function<void()> wakeup_;
  int next_id_ = 1;
};

// Participant ids p01, p02, ... for a roster of n.
std::vector<std::string> numbered_roster(int n);

}  // namespace pdlab::session
