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

#include "pdlab/session/export.hpp"

#include <fstream>

#include "pdlab/csv.hpp"
#include "pdlab/error.hpp"

namespace pdlab::session {

const std::vector<std::string>& interaction_columns() {
  static const std::vector<std::string> cols = {
      "session_id",     "pairing",          "labeling",       "communication", "round",
      "participant_id", "associate_id",     "associate_kind", "own_msg1",      "associate_msg1",
      "own_msg2",       "associate_msg2",   "own_choice",     "associate_choice", "own_payoff",
      "associate_payoff", "own_fallback",   "associate_fallback"};
  return cols;
}

const std::vector<std::string>& questionnaire_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = {"session_id", "pairing", "labeling", "participant_id", "norm_lo", "norm_hi"};
    for (auto t : kTraitItems) c.emplace_back(t);
    for (auto s : kSevenCItems) c.emplace_back(s);
    for (const char* x : {"humanness", "llm_familiarity", "svo", "age", "gender", "field"}) c.emplace_back(x);
    return c;
  }();
  return cols;
}

const std::vector<std::string>& payout_columns() {
  static const std::vector<std::string> cols = {"session_id", "participant_id", "total_points", "norm_correct",
                                                "payout",     "currency"};
  return cols;
}

namespace {

std::ofstream open(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + p.string());
  return out;
}

std::string message_text(const PairRound& r, int seat, int slot) {
  for (const auto& m : r.messages) {
    if (m.seat == seat && m.slot == slot) return m.text;
  }
  return {};
}

std::string associate_kind(const SessionResult& s) {
  const auto persona = agent_persona(s.treatment.pairing);
  return persona ? std::string(agent::to_string(*persona)) : "human";
}

}  // namespace

DatasetFiles export_dataset(const std::vector<SessionResult>& sessions, const std::filesystem::path& dir) {
  for (const auto& s : sessions) {
    if (!s.complete) throw Error(Errc::SessionIncomplete, "session " + s.session_id + " is not complete");
  }
  std::filesystem::create_directories(dir);
  DatasetFiles files{dir / "interactions.csv", dir / "questionnaire.csv", dir / "payouts.csv"};

  auto inter = open(files.interactions);
  csv::write_row(inter, interaction_columns());
  for (const auto& s : sessions) {
    for (const auto& r : s.interactions) {
      for (int seat = 0; seat < 2; ++seat) {
        if (r.agent[seat]) continue;
        const int other = 1 - seat;
        csv::write_row(inter, {s.session_id,
                               std::string(to_string(s.treatment.pairing)),
                               std::string(to_string(s.treatment.labeling)),
                               s.treatment.communication ? "1" : "0",
                               std::to_string(r.round),
                               r.ids[seat],
                               r.ids[other],
                               r.agent[other] ? associate_kind(s) : "human",
                               message_text(r, seat, 1),
                               message_text(r, other, 1),
                               message_text(r, seat, 2),
                               message_text(r, other, 2),
                               std::string(game::to_string(r.choices[seat].choice)),
                               std::string(game::to_string(r.choices[other].choice)),
                               std::to_string(r.payoffs[seat]),
                               std::to_string(r.payoffs[other]),
                               r.choices[seat].fallback ? "1" : "0",
                               r.choices[other].fallback ? "1" : "0"});
      }
    }
  }

  auto quest = open(files.questionnaire);
  csv::write_row(quest, questionnaire_columns());
  for (const auto& s : sessions) {
    for (const auto& p : s.participants) {
      if (!p.questionnaire) continue;
      const auto& q = *p.questionnaire;
      csv::Row row = {s.session_id,
                      std::string(to_string(s.treatment.pairing)),
                      std::string(to_string(s.treatment.labeling)),
                      p.id,
                      std::to_string(q.norm_estimate.lo),
                      std::to_string(q.norm_estimate.hi)};
      for (auto t : kTraitItems) row.push_back(std::to_string(q.trait_likerts.at(std::string(t))));
      for (auto c : kSevenCItems) row.push_back(std::to_string(q.seven_c_likerts.at(std::string(c))));
      row.push_back(q.humanness ? std::to_string(*q.humanness) : "");
      row.push_back(std::to_string(q.llm_familiarity));
      std::string svo;
      for (std::size_t i = 0; i < q.svo_items.size(); ++i) svo += (i ? ";" : "") + std::to_string(q.svo_items[i]);
      row.push_back(svo);
      row.push_back(std::to_string(q.demographics.age));
      row.push_back(q.demographics.gender);
      row.push_back(q.demographics.field);
      csv::write_row(quest, row);
    }
  }

  auto pay = open(files.payouts);
  csv::write_row(pay, payout_columns());
  for (const auto& s : sessions) {
    for (const auto& p : s.participants) {
      csv::write_row(pay, {s.session_id, p.id, std::to_string(p.total_points), p.norm_correct ? "1" : "0",
                           p.payout.to_string(), s.currency});
    }
  }
  return files;
}

}  // namespace pdlab::session
