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

#include <string>
#include <vector>

#include "pdlab/agent/persona.hpp"
#include "pdlab/game/choice.hpp"
#include "pdlab/game/payoff.hpp"

namespace pdlab::agent {

struct HistoryEntry {
  int round_index = 0;
  game::Choice own_choice = game::Choice::A;
  game::Choice associate_choice = game::Choice::A;
  game::Points own_payoff = 0;
  game::Points associate_payoff = 0;

  bool operator==(const HistoryEntry&) const = default;
};

// The four messages of one round, seen from the agent's side.
struct RoundMessages {
  std::string own_first;
  std::string associate_first;
  std::string own_second;
  std::string associate_second;

  bool operator==(const RoundMessages&) const = default;
};

// An agent's private memory across rounds. total_payoff always equals the
// sum of own_payoff over history, and rounds are appended in increasing order.
class AgentState {
 public:
  AgentState(std::string agent_id, PersonaKind persona);

  const std::string& id() const { return id_; }
  PersonaKind persona() const { return persona_; }
  const std::vector<HistoryEntry>& history() const { return history_; }
  game::Points total_payoff() const { return total_; }

  // Throws Error{InvalidArgument} if entry.round_index does not exceed the last recorded round.
  void record_round(const HistoryEntry& entry);

  RoundMessages& conversation() { return conversation_; }
  const RoundMessages& conversation() const { return conversation_; }

 private:
  std::string id_;
  PersonaKind persona_;
  std::vector<HistoryEntry> history_;
  game::Points total_ = 0;
  RoundMessages conversation_;
};

}  // namespace pdlab::agent
