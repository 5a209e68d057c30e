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

#include <algorithm>
#include <map>

#include "pdlab/error.hpp"
#include "pdlab/session/session.hpp"

namespace pdlab::session {

using nlohmann::json;

SessionResult replay(const std::vector<EventRecord>& records) {
  if (records.empty() || records.front().kind != EventKind::SessionCreated) {
    throw Error(Errc::SchemaError, "event stream must begin with session_created");
  }
  const auto& created = records.front().payload;
  const SessionConfig config = parse_config(created.at("config"));

  SessionResult r;
  r.session_id = records.front().session_id;
  r.treatment = config.treatment;
  r.rounds = config.rounds;
  r.currency = config.currency;

  std::map<std::string, ParticipantResult> people;
  for (const auto& id : created.at("roster")) people[id.get<std::string>()].id = id.get<std::string>();

  std::map<std::pair<int, int>, PairRound> rounds;
  const auto key = [](const json& p) { return std::pair{p.at("round").get<int>(), p.at("pair").get<int>()}; };

  std::uint64_t expected = 1;
  for (const auto& rec : records) {
    if (rec.seq != expected++) throw Error(Errc::SchemaError, "event sequence numbers are not contiguous");
    const auto& p = rec.payload;
    switch (rec.kind) {
      case EventKind::QuizAttempt: {
        auto& who = people.at(p.at("participant").get<std::string>());
        who.quiz_attempts = std::max(who.quiz_attempts, p.at("attempt").get<int>());
        break;
      }
      case EventKind::MessageSent: {
        game::RoundMessage m;
        m.seat = p.at("seat").get<int>();
        m.slot = p.at("slot").get<int>();
        m.text = p.at("text").get<std::string>();
        m.at = p.at("at").get<game::EpochMs>();
        m.timed_out = p.at("timed_out").get<bool>();
        rounds[key(p)].messages.push_back(std::move(m));
        break;
      }
      case EventKind::ChoiceSubmitted: {
        const auto choice = game::parse_choice(p.at("choice").get<std::string>());
        if (!choice) throw Error(Errc::SchemaError, "bad choice in event log");
        rounds[key(p)].choices[p.at("seat").get<int>()] =
            game::ChoiceEntry{*choice, p.at("at").get<game::EpochMs>(), p.at("fallback").get<bool>()};
        break;
      }
      case EventKind::RoundResult: {
        auto& pr = rounds[key(p)];
        pr.round = p.at("round").get<int>();
        pr.pair = p.at("pair").get<int>();
        for (int s = 0; s < 2; ++s) {
          pr.ids[s] = p.at("ids").at(s).get<std::string>();
          pr.agent[s] = p.at("agent").at(s).get<bool>();
          pr.payoffs[s] = p.at("payoffs").at(s).get<game::Points>();
          if (!pr.agent[s]) people.at(pr.ids[s]).total_points += pr.payoffs[s];
        }
        break;
      }
      case EventKind::QuestionnaireSubmitted: {
        const auto id = p.at("participant").get<std::string>();
        auto resp = parse_response(p.at("response"), config.norm_bins);
        resp.participant_id = id;
        people.at(id).questionnaire = std::move(resp);
        break;
      }
      case EventKind::PayoutComputed: {
        auto& who = people.at(p.at("participant").get<std::string>());
        who.norm_correct = p.at("norm_correct").get<bool>();
        who.payout = Money{p.at("cents").get<std::int64_t>()};
        break;
      }
      case EventKind::SessionComplete:
        r.complete = true;
        break;
      default:
        break;
    }
  }

  for (auto& [k, pr] : rounds) {
    if (pr.round != 0) r.interactions.push_back(std::move(pr));
  }
  for (const auto& id : created.at("roster")) r.participants.push_back(people.at(id.get<std::string>()));
  return r;
}

}  // namespace pdlab::session
