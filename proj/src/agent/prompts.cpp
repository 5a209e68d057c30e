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

#include "pdlab/agent/prompts.hpp"

#include <fstream>
#include <sstream>

#include "pdlab/error.hpp"

namespace pdlab::agent {

namespace assets {
extern const std::string_view kSystem;
extern const std::string_view kRoleplayCooperative;
extern const std::string_view kRoleplayFair;
extern const std::string_view kRoleplaySelfish;
extern const std::string_view kFirstMessage;
extern const std::string_view kSecondMessage;
extern const std::string_view kDecision;
extern const std::string_view kHistoryLine;
}  // namespace assets

namespace {

std::string strip_trailing_newline(std::string s) {
  if (!s.empty() && s.back() == '\n') s.pop_back();
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read prompt template " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return strip_trailing_newline(ss.str());
}

bool is_placeholder_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '\'';
}

}  // namespace

const std::string& PromptSet::roleplay(PersonaKind kind) const {
  switch (kind) {
    case PersonaKind::Cooperative: return roleplay_cooperative;
    case PersonaKind::Fair: return roleplay_fair;
    case PersonaKind::Selfish: return roleplay_selfish;
  }
  return roleplay_fair;
}

const PromptSet& PromptSet::builtin() {
  static const PromptSet set{
      strip_trailing_newline(std::string(assets::kSystem)),
      strip_trailing_newline(std::string(assets::kRoleplayCooperative)),
      strip_trailing_newline(std::string(assets::kRoleplayFair)),
      strip_trailing_newline(std::string(assets::kRoleplaySelfish)),
      strip_trailing_newline(std::string(assets::kFirstMessage)),
      strip_trailing_newline(std::string(assets::kSecondMessage)),
      strip_trailing_newline(std::string(assets::kDecision)),
      strip_trailing_newline(std::string(assets::kHistoryLine)),
  };
  return set;
}

PromptSet PromptSet::load_directory(const std::filesystem::path& dir) {
  return PromptSet{
      read_file(dir / "system.txt"),         read_file(dir / "roleplay_cooperative.txt"),
      read_file(dir / "roleplay_fair.txt"),  read_file(dir / "roleplay_selfish.txt"),
      read_file(dir / "first_message.txt"),  read_file(dir / "second_message.txt"),
      read_file(dir / "decision.txt"),       read_file(dir / "history_line.txt"),
  };
}

std::string render_template(std::string_view tmpl, const TemplateValues& values) {
  std::string out;
  out.reserve(tmpl.size() + 256);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      std::size_t j = i + 1;
      while (j < tmpl.size() && is_placeholder_char(tmpl[j])) ++j;
      if (j < tmpl.size() && tmpl[j] == '}' && j > i + 1) {
        const std::string_view name = tmpl.substr(i + 1, j - i - 1);
        auto it = values.find(name);
        if (it == values.end()) {
          throw Error(Errc::TemplateError, "unresolved placeholder {" + std::string(name) + "}");
        }
        out += it->second;
        i = j + 1;
        continue;
      }
    }
    out += tmpl[i++];
  }
  return out;
}

std::string format_own_message(std::string_view text) { return "You: <" + std::string(text) + ">"; }

std::string format_associate_message(std::string_view text) {
  return "Your associate: <" + std::string(text) + ">";
}

std::string render_system_prompt(PersonaKind persona, std::string_view example_dialogues,
                                 const game::PayoffMatrix& payoff, const PromptSet& prompts) {
  return render_template(prompts.system,
                         {
                             {"CHINESE_EXAMPLE", std::string(example_dialogues)},
                             {"ROLEPLAY_PROMPT", prompts.roleplay(persona)},
                             {"MUTUAL_COOPERATION_PAYOFF", std::to_string(payoff.mutual_coop())},
                             {"MUTUAL_DEFECTION_PAYOFF", std::to_string(payoff.mutual_defect())},
                             {"SUCKER_PAYOFF", std::to_string(payoff.sucker())},
                             {"TEMPTATION_PAYOFF", std::to_string(payoff.temptation())},
                         });
}

std::string render_first_message_prompt(int round_index, PersonaKind persona, const PromptSet& prompts) {
  if (round_index < 1) throw Error(Errc::InvalidArgument, "round index starts at 1");
  return render_template(prompts.first_message, {
                                                    {"ROUND_NUMBER", std::to_string(round_index)},
                                                    {"PERSONA_NAME", std::string(persona_name(persona))},
                                                });
}

std::string render_second_message_prompt(std::string_view own_first, std::string_view associate_first,
                                         const PromptSet& prompts) {
  return render_template(prompts.second_message, {
                                                     {"YOUR_FIRST_MESSAGE", format_own_message(own_first)},
                                                     {"YOUR_ASSOCIATE'S_FIRST_MESSAGE",
                                                      format_associate_message(associate_first)},
                                                 });
}

std::string render_decision_prompt(const AgentState& state, const RoundMessages& round_msgs, int round_index,
                                   const PromptSet& prompts) {
  std::string transcript = format_own_message(round_msgs.own_first) + "\n" +
                           format_associate_message(round_msgs.associate_first) + "\n" +
                           format_own_message(round_msgs.own_second) + "\n" +
                           format_associate_message(round_msgs.associate_second);

  std::string history;
  for (const auto& h : state.history()) {
    if (!history.empty()) history += "\n";
    history += render_template(prompts.history_line, {
                                                         {"ROUND_NUMBER", std::to_string(h.round_index)},
                                                         {"PLAYER1_CHOICE", std::string(game::to_string(h.own_choice))},
                                                         {"PLAYER2_CHOICE",
                                                          std::string(game::to_string(h.associate_choice))},
                                                         {"PLAYER1_PAYOFF", std::to_string(h.own_payoff)},
                                                         {"PLAYER2_PAYOFF", std::to_string(h.associate_payoff)},
                                                     });
  }
  if (!history.empty()) history += "\n\n";

  return render_template(prompts.decision, {
                                               {"COMMUNICATION_MESSAGES", transcript},
                                               {"GAME_HISTORY", history},
                                               {"PLAYER_TOTAL_PAYOFF", std::to_string(state.total_payoff())},
                                               {"ROUND_NUMBER", std::to_string(round_index)},
                                               {"PERSONA_NAME", std::string(persona_name(state.persona()))},
                                           });
}

}  // namespace pdlab::agent
