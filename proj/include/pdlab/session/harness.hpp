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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pdlab/session/session.hpp"

namespace pdlab::session {

// How a simulated human behaves. Delays are measured from the server
// message that prompts the action.
struct ScriptedBehavior {
  int wrong_quiz_attempts = 0;
  std::chrono::milliseconds delay{2'000};
  std::function<game::Choice(int round)> choose = [](int) { return game::Choice::A; };
  std::function<std::string(int round, int slot)> message = [](int, int slot) {
    return slot == 1 ? "我们都选A吧" : "好的，一言为定";
  };
  // Stop acting and drop the connection when round disconnect_at_round starts.
  std::optional<int> disconnect_at_round;
  // Never answer in these stages (by stage name); exercises timeouts.
  std::vector<std::string> silent_stages;
  bool answer_questionnaire = true;
  // Wire-form questionnaire answers; a valid default when unset.
  std::optional<nlohmann::json> questionnaire;
};

// A valid questionnaire answer for the labeling (norm estimate [40, 60)).
nlohmann::json default_questionnaire_answers(Labeling labeling);

struct ClientAction {
  game::EpochMs at = 0;
  std::optional<ClientMessage> message;
  bool disconnect = false;
};

class ScriptedClient {
 public:
  ScriptedClient(std::string participant, ScriptedBehavior behavior, const SessionConfig& config);
  std::vector<ClientAction> react(const ServerMessage& m, game::EpochMs now);
  const std::vector<ServerMessage>& received() const { return received_; }
  const std::string& participant() const { return participant_; }

 private:
  std::string participant_;
  ScriptedBehavior behavior_;
  std::vector<QuizItem> quiz_;
  Labeling labeling_;
  int quiz_tries_ = 0;
  int next_id_ = 0;
  bool gone_ = false;
  std::vector<ServerMessage> received_;
};

struct HarnessOptions {
  game::EpochMs start = 1'700'000'000'000;
  // 0 jumps straight to each deadline; otherwise the clock advances in
  // whole ticks, as a polling server would.
  std::chrono::milliseconds tick{0};
  std::shared_ptr<agent::Backend> backend;  // default: make_backend(config.agent)
  ScriptedBehavior behavior;
  std::map<std::string, ScriptedBehavior> per_participant;
  std::optional<std::filesystem::path> log_path;
  std::string session_id = "session-1";
};

struct HarnessRun {
  SessionResult result;
  std::vector<EventRecord> events;
  std::map<std::string, std::vector<ServerMessage>> received;
};

// Runs a whole session on a simulated clock with scripted clients and the
// inline executor. Deterministic for fixed (config, roster, options).
// Throws Error{SessionIncomplete} if the session stalls.
HarnessRun run_session(const SessionConfig& config, const std::vector<std::string>& roster,
                       const HarnessOptions& options = {});

}  // namespace pdlab::session
