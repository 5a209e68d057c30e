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

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pdlab/game/choice.hpp"
#include "pdlab/game/payoff.hpp"
#include "pdlab/game/rng.hpp"

namespace pdlab::game {

// Wall-clock instants are milliseconds since the Unix epoch; all of them
// are injected by the caller.
using EpochMs = std::int64_t;

enum class Stage { Msg1Compose, Msg1Read, Msg2Compose, Msg2Read, Decide, Results, Done };

std::string_view to_string(Stage stage);
std::optional<Stage> parse_stage(std::string_view name);

struct StageTimers {
  std::chrono::milliseconds compose{60'000};
  std::chrono::milliseconds read{30'000};
  std::chrono::milliseconds decide{40'000};
  std::chrono::milliseconds results{30'000};

  std::chrono::milliseconds duration(Stage stage) const;
  bool operator==(const StageTimers&) const = default;
};

struct RoundRules {
  PayoffMatrix payoff;
  StageTimers timers;
  bool communication = true;
};

// Seats are 0 and 1 within a pair.
struct RoundMessage {
  int seat = 0;
  int slot = 1;  // 1 or 2
  std::string text;
  EpochMs at = 0;
  bool timed_out = false;  // filled with an empty message on compose timeout

  bool operator==(const RoundMessage&) const = default;
};

struct ChoiceEntry {
  Choice choice = Choice::A;
  EpochMs at = 0;
  bool fallback = false;  // drawn at random instead of submitted

  bool operator==(const ChoiceEntry&) const = default;
};

struct RoundState {
  int round_index = 1;
  Stage stage = Stage::Msg1Compose;
  std::vector<RoundMessage> messages;
  std::array<std::optional<ChoiceEntry>, 2> choices;
  std::optional<std::array<Points, 2>> payoffs;
  EpochMs stage_entered = 0;
  EpochMs deadline = 0;

  // The message seat sent in slot, if any.
  const RoundMessage* message(int seat, int slot) const;

  bool operator==(const RoundState&) const = default;
};

namespace event {

struct SubmitMessage {
  int seat = 0;
  std::string text;
  EpochMs at = 0;
};

struct SubmitChoice {
  int seat = 0;
  Choice choice = Choice::A;
  EpochMs at = 0;
  bool fallback = false;  // set when the submitter itself fell back (e.g. unparseable agent output)
};

struct TimerExpired {
  EpochMs at = 0;
};

}  // namespace event

using StageEvent = std::variant<event::SubmitMessage, event::SubmitChoice, event::TimerExpired>;

// First stage of a round: Msg1Compose with communication, Decide without.
RoundState begin_round(int round_index, const RoundRules& rules, EpochMs now);

// Pure successor function. The only side effect is on rng, which is drawn
// from exactly once per missing choice when the Decide stage times out.
//
// - compose stages advance once both seats submitted, or on timer expiry
//   (missing messages become empty and are marked timed_out);
// - read stages and Results advance only on timer expiry;
// - Decide advances to Results with payoffs once both choices exist.
//
// Throws Error{IllegalEvent} for events the stage does not accept and
// Error{DuplicateSubmission} for a second submission from the same seat.
RoundState advance(const RoundState& state, const StageEvent& ev, const RoundRules& rules, Rng& rng);

}  // namespace pdlab::game
