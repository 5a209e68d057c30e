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

#include "pdlab/game/round_state.hpp"

#include <string>

#include "pdlab/error.hpp"

namespace pdlab::game {

namespace {

constexpr std::array<std::string_view, 7> kStageNames = {
    "msg1_compose", "msg1_read", "msg2_compose", "msg2_read", "decide", "results", "done"};

int compose_slot(Stage s) { return s == Stage::Msg1Compose ? 1 : 2; }

bool is_compose(Stage s) { return s == Stage::Msg1Compose || s == Stage::Msg2Compose; }

Stage next_stage(Stage s) { return static_cast<Stage>(static_cast<int>(s) + 1); }

RoundState enter(RoundState next, Stage stage, EpochMs at, const RoundRules& rules) {
  next.stage = stage;
  next.stage_entered = at;
  next.deadline = stage == Stage::Done ? at : at + rules.timers.duration(stage).count();
  return next;
}

void check_seat(int seat) {
  if (seat != 0 && seat != 1) throw Error(Errc::IllegalEvent, "seat must be 0 or 1");
}

RoundState settle_choices(RoundState next, EpochMs at, const RoundRules& rules) {
  const auto [p0, p1] = score_round(next.choices[0]->choice, next.choices[1]->choice, rules.payoff);
  next.payoffs = std::array<Points, 2>{p0, p1};
  return enter(std::move(next), Stage::Results, at, rules);
}

}  // namespace

std::string_view to_string(Stage stage) { return kStageNames[static_cast<std::size_t>(stage)]; }

std::optional<Stage> parse_stage(std::string_view name) {
  for (std::size_t i = 0; i < kStageNames.size(); ++i) {
    if (kStageNames[i] == name) return static_cast<Stage>(i);
  }
  return std::nullopt;
}

std::chrono::milliseconds StageTimers::duration(Stage stage) const {
  switch (stage) {
    case Stage::Msg1Compose:
    case Stage::Msg2Compose:
      return compose;
    case Stage::Msg1Read:
    case Stage::Msg2Read:
      return read;
    case Stage::Decide:
      return decide;
    case Stage::Results:
      return results;
    case Stage::Done:
      break;
  }
  return std::chrono::milliseconds{0};
}

const RoundMessage* RoundState::message(int seat, int slot) const {
  for (const auto& m : messages) {
    if (m.seat == seat && m.slot == slot) return &m;
  }
  return nullptr;
}

RoundState begin_round(int round_index, const RoundRules& rules, EpochMs now) {
  if (round_index < 1) throw Error(Errc::InvalidArgument, "round index starts at 1");
  RoundState s;
  s.round_index = round_index;
  return enter(std::move(s), rules.communication ? Stage::Msg1Compose : Stage::Decide, now, rules);
}

RoundState advance(const RoundState& state, const StageEvent& ev, const RoundRules& rules, Rng& rng) {
  if (state.stage == Stage::Done) throw Error(Errc::IllegalEvent, "round is already done");

  if (const auto* msg = std::get_if<event::SubmitMessage>(&ev)) {
    if (!is_compose(state.stage)) {
      throw Error(Errc::IllegalEvent,
                  "message submitted during " + std::string(to_string(state.stage)));
    }
    check_seat(msg->seat);
    const int slot = compose_slot(state.stage);
    if (state.message(msg->seat, slot) != nullptr) {
      throw Error(Errc::DuplicateSubmission,
                  "seat " + std::to_string(msg->seat) + " already sent message " + std::to_string(slot));
    }
    RoundState next = state;
    next.messages.push_back(RoundMessage{msg->seat, slot, msg->text, msg->at, false});
    if (next.message(1 - msg->seat, slot) != nullptr) {
      return enter(std::move(next), next_stage(state.stage), msg->at, rules);
    }
    return next;
  }

  if (const auto* pick = std::get_if<event::SubmitChoice>(&ev)) {
    if (state.stage != Stage::Decide) {
      throw Error(Errc::IllegalEvent, "choice submitted during " + std::string(to_string(state.stage)));
    }
    check_seat(pick->seat);
    if (state.choices[pick->seat].has_value()) {
      throw Error(Errc::DuplicateSubmission, "seat " + std::to_string(pick->seat) + " already chose");
    }
    RoundState next = state;
    next.choices[pick->seat] = ChoiceEntry{pick->choice, pick->at, pick->fallback};
    if (next.choices[1 - pick->seat].has_value()) return settle_choices(std::move(next), pick->at, rules);
    return next;
  }

  const auto& expiry = std::get<event::TimerExpired>(ev);
  if (expiry.at < state.deadline) {
    throw Error(Errc::IllegalEvent, "timer expiry before the stage deadline");
  }
  // Successor deadlines are measured from the scheduled deadline so that
  // tick latency does not accumulate across stages.
  const EpochMs at = state.deadline;
  RoundState next = state;
  if (is_compose(state.stage)) {
    const int slot = compose_slot(state.stage);
    for (int seat = 0; seat < 2; ++seat) {
      if (next.message(seat, slot) == nullptr) {
        next.messages.push_back(RoundMessage{seat, slot, std::string{}, at, true});
      }
    }
    return enter(std::move(next), next_stage(state.stage), at, rules);
  }
  if (state.stage == Stage::Decide) {
    for (int seat = 0; seat < 2; ++seat) {
      if (!next.choices[seat].has_value()) next.choices[seat] = ChoiceEntry{random_choice(rng), at, true};
    }
    return settle_choices(std::move(next), at, rules);
  }
  return enter(std::move(next), next_stage(state.stage), at, rules);
}

}  // namespace pdlab::game
