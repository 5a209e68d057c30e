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

#include <optional>
#include <string>
#include <vector>

#include "pdlab/agent/agent_state.hpp"
#include "pdlab/agent/backend.hpp"
#include "pdlab/agent/prompts.hpp"
#include "pdlab/game/payoff.hpp"

namespace pdlab::agent {

struct AgentSettings {
  std::string example_dialogues;
  game::PayoffMatrix payoff;
  std::string params_json = "{}";
  std::chrono::milliseconds timeout{60'000};
  // Used for both transport retries and re-asking after unparseable output.
  int max_retries = 2;
  RetryPolicy retry;
};

struct MessageTurn {
  std::string text;
  bool fallback = false;  // output never contained <...>; text is empty
  std::vector<std::string> raw_outputs;
};

struct DecisionTurn {
  std::optional<game::Choice> choice;  // nullopt: caller applies the random fallback
  std::vector<std::string> raw_outputs;
};

// Drives one agent through the three completions of a round. Parse failures
// are retried by re-asking the backend up to settings.max_retries times.
// Error{BackendUnavailable} from the transport layer propagates.
class AgentRunner {
 public:
  AgentRunner(AgentState& state, Backend& backend, AgentSettings settings,
              const PromptSet& prompts = PromptSet::builtin(), CompletionLogger logger = {});

  MessageTurn first_message(int round_index);
  MessageTurn second_message(const std::string& own_first, const std::string& associate_first);
  DecisionTurn decide(const RoundMessages& round_msgs, int round_index);

  const std::string& system_prompt() const { return system_prompt_; }

 private:
  CompletionRequest request(std::string prompt) const;
  MessageTurn message_turn(const std::string& prompt);

  AgentState& state_;
  Backend& backend_;
  AgentSettings settings_;
  const PromptSet& prompts_;
  CompletionLogger logger_;
  std::string system_prompt_;
};

}  // namespace pdlab::agent
