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

#include "pdlab/agent/agent_state.hpp"

#include <utility>

#include "pdlab/error.hpp"

namespace pdlab::agent {

AgentState::AgentState(std::string agent_id, PersonaKind persona) : id_(std::move(agent_id)), persona_(persona) {}

void AgentState::record_round(const HistoryEntry& entry) {
  if (!history_.empty() && entry.round_index <= history_.back().round_index) {
    throw Error(Errc::InvalidArgument, "round " + std::to_string(entry.round_index) + " recorded after round " +
                                           std::to_string(history_.back().round_index));
  }
  history_.push_back(entry);
  total_ += entry.own_payoff;
  conversation_ = {};
}

}  // namespace pdlab::agent
