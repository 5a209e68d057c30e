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

#include "pdlab/agent/agent_runner.hpp"

#include "pdlab/agent/parse.hpp"

namespace pdlab::agent {

AgentRunner::AgentRunner(AgentState& state, Backend& backend, AgentSettings settings, const PromptSet& prompts,
                         CompletionLogger logger)
    : state_(state),
      backend_(backend),
      settings_(std::move(settings)),
      prompts_(prompts),
      logger_(std::move(logger)),
      system_prompt_(render_system_prompt(state.persona(), settings_.example_dialogues, settings_.payoff, prompts)) {}

CompletionRequest AgentRunner::request(std::string prompt) const {
  CompletionRequest r;
  r.system_prompt = system_prompt_;
  r.prompt = std::move(prompt);
  r.params_json = settings_.params_json;
  r.timeout = settings_.timeout;
  r.max_retries = settings_.max_retries;
  r.caller_id = state_.id();
  return r;
}

MessageTurn AgentRunner::message_turn(const std::string& prompt) {
  MessageTurn turn;
  const CompletionRequest req = request(prompt);
  for (int attempt = 0; attempt <= settings_.max_retries; ++attempt) {
    turn.raw_outputs.push_back(complete(backend_, req, logger_, settings_.retry));
    if (auto msg = find_bracketed_message(turn.raw_outputs.back())) {
      turn.text = *msg;
      return turn;
    }
  }
  turn.fallback = true;
  return turn;
}

MessageTurn AgentRunner::first_message(int round_index) {
  MessageTurn turn = message_turn(render_first_message_prompt(round_index, state_.persona(), prompts_));
  state_.conversation() = {};
  state_.conversation().own_first = turn.text;
  return turn;
}

MessageTurn AgentRunner::second_message(const std::string& own_first, const std::string& associate_first) {
  MessageTurn turn = message_turn(render_second_message_prompt(own_first, associate_first, prompts_));
  state_.conversation().associate_first = associate_first;
  state_.conversation().own_second = turn.text;
  return turn;
}

DecisionTurn AgentRunner::decide(const RoundMessages& round_msgs, int round_index) {
  state_.conversation() = round_msgs;
  DecisionTurn turn;
  const CompletionRequest req = request(render_decision_prompt(state_, round_msgs, round_index, prompts_));
  for (int attempt = 0; attempt <= settings_.max_retries; ++attempt) {
    turn.raw_outputs.push_back(complete(backend_, req, logger_, settings_.retry));
    if (auto c = find_decision(turn.raw_outputs.back())) {
      turn.choice = c;
      return turn;
    }
  }
  return turn;
}

}  // namespace pdlab::agent
