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

#include "pdlab/agent/mock_backend.hpp"

#include <regex>

#include "pdlab/agent/prompts.hpp"
#include "pdlab/error.hpp"
#include "pdlab/game/rng.hpp"

namespace pdlab::agent {

namespace {

struct Script {
  std::string_view first;
  std::string_view second;
};

Script script_for(PersonaKind persona) {
  switch (persona) {
    case PersonaKind::Cooperative:
      return {"我们一起选A吧，双赢！", "放心，我一定选A，我们都拿70分。"};
    case PersonaKind::Fair:
      return {"咱们都选A，公平又划算，好吗？", "说好了都选A，谁也别吃亏。"};
    case PersonaKind::Selfish:
      return {"我们都选A吧，大家都能拿70分。", "没问题，我会选A的。"};
  }
  return {"", ""};
}

std::string_view persona_reason(PersonaKind persona) {
  switch (persona) {
    case PersonaKind::Cooperative:
      return "As a cooperative player I want both of us to do well.";
    case PersonaKind::Fair:
      return "As a fair-minded player I value a fair outcome but protect my own payoff.";
    case PersonaKind::Selfish:
      return "As an individualistic player only my own payoff matters.";
  }
  return "";
}

std::optional<PersonaKind> persona_in(std::string_view text) {
  for (PersonaKind k : kAllPersonas) {
    const std::string marker = std::string(persona_name(k)) + " human";
    if (text.find(marker) != std::string_view::npos) return k;
  }
  return std::nullopt;
}

}  // namespace

std::string mock_policy_step(PersonaKind persona, Phase phase, const MockContext& context,
                             const MockPolicyConfig& config) {
  std::string out;
  out += "STEP 1: If I choose B and my associate chooses A, I get more; if both choose B we both get less.\n";
  out += "STEP 2: If we both choose A we both get a good payoff; if I choose A alone I get the least.\n";
  if (phase == Phase::Message) {
    const Script s = script_for(persona);
    out += "STEP 3: ";
    out += persona_reason(persona);
    out += " The ideal strategy pair is (A, A).\n";
    out += "STEP 4: <";
    out += context.message_slot == 2 ? s.second : s.first;
    out += ">";
    return out;
  }

  game::Choice choice = game::Choice::A;
  std::string_view why = "I will trust my associate.";
  switch (persona) {
    case PersonaKind::Cooperative:
      break;
    case PersonaKind::Selfish:
      if (context.draw < config.selfish_defect_probability) {
        choice = game::Choice::B;
        why = "Whatever my associate does, B pays me more.";
      }
      break;
    case PersonaKind::Fair:
      if (context.exploited_last_round) {
        choice = game::Choice::B;
        why = "I was exploited last round, so cooperating is too risky.";
      } else if (context.draw < config.fair_risk_probability) {
        choice = game::Choice::B;
        why = "The risk of being exploited is too high this time.";
      }
      break;
  }
  out += "STEP 3: Each round I meet a new associate.\n";
  out += "STEP 4: The messages promise A. ";
  out += why;
  out += "\nSTEP 5: ";
  out += persona_reason(persona);
  out += "\nI DECIDE TO CHOOSE ";
  out += game::to_char(choice);
  return out;
}

MockBackend::MockBackend(std::uint64_t seed, MockPolicyConfig config, std::string id)
    : seed_(seed), config_(config), id_(std::move(id)) {}

MockContext MockBackend::context_from_prompt(std::string_view prompt) {
  MockContext ctx;
  static const std::regex welcome(R"(Welcome to round (\d+)\.)");
  static const std::regex now_round(R"(Now this is the (\d+) round)");
  static const std::regex history(R"(In round (\d+): you choose ([AB]), your associate chooses ([AB]))");
  const std::string text(prompt);
  std::smatch m;
  if (std::regex_search(text, m, welcome) || std::regex_search(text, m, now_round)) {
    ctx.round_index = std::stoi(m[1].str());
  }
  if (text.find("send your second message") != std::string::npos) ctx.message_slot = 2;

  // The last history line describes the previous round.
  for (auto it = std::sregex_iterator(text.begin(), text.end(), history); it != std::sregex_iterator(); ++it) {
    ctx.exploited_last_round = (*it)[2].str() == "A" && (*it)[3].str() == "B";
  }
  return ctx;
}

std::string MockBackend::send(const CompletionRequest& request) {
  auto persona = persona_in(request.prompt);
  if (!persona) persona = persona_in(request.system_prompt);
  if (!persona) throw Error(Errc::InvalidArgument, "mock backend cannot identify the persona from the prompt");

  const Phase phase = request.prompt.find("I DECIDE TO CHOOSE") != std::string::npos ? Phase::Decision
                                                                                     : Phase::Message;
  MockContext ctx = context_from_prompt(request.prompt);

  std::uint64_t h = game::mix_seed(seed_, 0);
  h = game::fnv1a(request.caller_id.data(), request.caller_id.size(), h);
  h = game::fnv1a(request.system_prompt.data(), request.system_prompt.size(), h);
  h = game::fnv1a(request.prompt.data(), request.prompt.size(), h);
  game::Rng rng(game::mix_seed(h, seed_));
  ctx.draw = game::uniform_unit(rng);

  return mock_policy_step(*persona, phase, ctx, config_);
}

}  // namespace pdlab::agent
