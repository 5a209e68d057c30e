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
#include <map>
#include <string>
#include <string_view>

#include "pdlab/agent/agent_state.hpp"
#include "pdlab/agent/persona.hpp"
#include "pdlab/game/payoff.hpp"

namespace pdlab::agent {

// The agent prompt pipeline as editable text assets. Placeholders are
// written {NAME}; see assets/prompts for the shipped set.
struct PromptSet {
  std::string system;
  std::string roleplay_cooperative;
  std::string roleplay_fair;
  std::string roleplay_selfish;
  std::string first_message;
  std::string second_message;
  std::string decision;
  std::string history_line;

  const std::string& roleplay(PersonaKind kind) const;

  // The templates compiled into the binary.
  static const PromptSet& builtin();

  // Reads <name>.txt for every template from dir. A single trailing newline
  // is dropped so files saved by editors render identically.
  static PromptSet load_directory(const std::filesystem::path& dir);
};

using TemplateValues = std::map<std::string, std::string, std::less<>>;

// Single-pass substitution of {NAME} tokens. Substituted values are not
// rescanned. Throws Error{TemplateError} when a token has no value.
std::string render_template(std::string_view tmpl, const TemplateValues& values);

std::string render_system_prompt(PersonaKind persona, std::string_view example_dialogues,
                                 const game::PayoffMatrix& payoff, const PromptSet& prompts = PromptSet::builtin());

std::string render_first_message_prompt(int round_index, PersonaKind persona,
                                        const PromptSet& prompts = PromptSet::builtin());

std::string render_second_message_prompt(std::string_view own_first, std::string_view associate_first,
                                         const PromptSet& prompts = PromptSet::builtin());

// history lines come from state (one per completed round), followed by the
// running total and the decision directives.
std::string render_decision_prompt(const AgentState& state, const RoundMessages& round_msgs, int round_index,
                                   const PromptSet& prompts = PromptSet::builtin());

// How a single exchanged message appears inside prompts.
std::string format_own_message(std::string_view text);
std::string format_associate_message(std::string_view text);

}  // namespace pdlab::agent
