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
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pdlab/agent/http_backend.hpp"
#include "pdlab/agent/mock_backend.hpp"
#include "pdlab/agent/persona.hpp"
#include "pdlab/game/round_state.hpp"

namespace pdlab::session {

enum class Pairing { HH, HF, HC, HS };
enum class Labeling { Informed, Uninformed };

std::string_view to_string(Pairing p);
std::string_view to_string(Labeling l);
std::optional<Pairing> parse_pairing(std::string_view s);
std::optional<Labeling> parse_labeling(std::string_view s);

// Persona of the agent associate, or nullopt for HH.
std::optional<agent::PersonaKind> agent_persona(Pairing p);

struct Treatment {
  Pairing pairing = Pairing::HH;
  Labeling labeling = Labeling::Informed;
  bool communication = true;
  bool operator==(const Treatment&) const = default;
};

// What participants are told their associates are.
std::string associate_label(const Treatment& t);

// Currency amounts in hundredths.
struct Money {
  std::int64_t cents = 0;
  std::string to_string() const;  // "67.00"
  static Money parse(std::string_view text);
  bool operator==(const Money&) const = default;
};

// Norm-estimate interval in whole percent; the final bin also contains hi.
struct NormBin {
  int lo = 0;
  int hi = 20;
  bool closed = false;
  bool operator==(const NormBin&) const = default;
};

std::vector<NormBin> make_norm_bins(int width);

struct QuizItem {
  std::string id;
  std::string question;
  std::vector<std::string> options;
  std::string answer;
  bool operator==(const QuizItem&) const = default;
};

enum class AgentMemory { Persistent, FreshPerRound };

struct AgentConfig {
  std::string backend = "mock";  // "mock" or "http"
  AgentMemory memory = AgentMemory::Persistent;
  std::string example_dialogues;
  std::string params_json = "{}";
  std::chrono::milliseconds timeout{60'000};
  int max_retries = 2;
  agent::HttpBackendConfig http;
  agent::MockPolicyConfig mock;
};

struct SessionConfig {
  int rounds = 10;
  game::StageTimers timers;
  game::PayoffMatrix payoff;
  // Currency per point in millionths (0.06 -> 60000).
  std::int64_t exchange_rate_micros = 60'000;
  Money show_up_fee{1500};
  Money norm_bonus{1000};
  std::string currency = "CNY";
  Treatment treatment;
  std::uint64_t seed = 1;
  std::vector<std::string> questionnaire_battery = default_battery();
  std::vector<NormBin> norm_bins = make_norm_bins(20);
  std::chrono::milliseconds questionnaire_timeout{600'000};
  std::vector<QuizItem> quiz;  // empty: generated from the payoff matrix
  // Instruction text overrides keyed "HF/informed" etc.
  std::map<std::string, std::string> instructions;
  AgentConfig agent;

  static std::vector<std::string> default_battery();
  game::RoundRules round_rules() const;
};

// Throws Error{ConfigInvalid} naming the offending field. Unknown keys are
// rejected so typos do not silently fall back to defaults.
SessionConfig parse_config(const nlohmann::json& j);
SessionConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const SessionConfig& c);

// Checks the config-level invariants; parse_config already calls this.
void validate(const SessionConfig& c);

// Instruction text for the config's treatment: an override if present,
// otherwise the built-in template.
std::string instruction_text(const SessionConfig& c);
// Quiz items: c.quiz, or four payoff-lookup questions.
std::vector<QuizItem> quiz_items(const SessionConfig& c);

enum class QuizOutcome { Pass, Retake };
// Pass iff every item has a matching answer (compared after trimming).
QuizOutcome quiz_gate(const std::map<std::string, std::string>& answers, const std::vector<QuizItem>& key);

}  // namespace pdlab::session
