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

#include "pdlab/session/harness.hpp"

#include <algorithm>
#include <queue>

#include "pdlab/error.hpp"

namespace pdlab::session {

using nlohmann::json;

json default_questionnaire_answers(Labeling labeling) {
  json traits, seven_c;
  for (auto t : kTraitItems) traits[std::string(t)] = 1;
  for (auto c : kSevenCItems) seven_c[std::string(c)] = 1;
  json j = {{"norm_estimate", {40, 60}},
            {"traits", traits},
            {"seven_c", seven_c},
            {"llm_familiarity", 3},
            {"svo", {85, 85, 85, 85, 85, 85}},
            {"demographics", {{"age", 21}, {"gender", "unspecified"}, {"field", "economics"}}}};
  if (labeling == Labeling::Uninformed) j["humanness"] = 0;
  return j;
}

ScriptedClient::ScriptedClient(std::string participant, ScriptedBehavior behavior, const SessionConfig& config)
    : participant_(std::move(participant)),
      behavior_(std::move(behavior)),
      quiz_(quiz_items(config)),
      labeling_(config.treatment.labeling) {}

std::vector<ClientAction> ScriptedClient::react(const ServerMessage& m, game::EpochMs now) {
  received_.push_back(m);
  if (gone_) return {};
  const game::EpochMs at = now + behavior_.delay.count();
  const auto act = [&](auto body) {
    ClientMessage msg{participant_ + "-" + std::to_string(++next_id_), std::move(body)};
    return std::vector<ClientAction>{{at, std::move(msg), false}};
  };

  if (m.type == "quiz") {
    client::QuizAnswers a;
    const bool wrong = quiz_tries_++ < behavior_.wrong_quiz_attempts;
    for (const auto& q : quiz_) a.answers[q.id] = wrong ? q.answer + "0" : q.answer;
    return act(std::move(a));
  }
  if (m.type == "stage_enter") {
    const int round = m.body.at("round").get<int>();
    const auto stage = m.body.at("stage").get<std::string>();
    if (behavior_.disconnect_at_round && round >= *behavior_.disconnect_at_round) {
      gone_ = true;
      return {{now, std::nullopt, true}};
    }
    const auto& silent = behavior_.silent_stages;
    if (std::find(silent.begin(), silent.end(), stage) != silent.end()) return {};
    if (stage == "msg1_compose") return act(client::MessageText{behavior_.message(round, 1)});
    if (stage == "msg2_compose") return act(client::MessageText{behavior_.message(round, 2)});
    if (stage == "decide") return act(client::Choice{behavior_.choose(round)});
    return {};
  }
  if (m.type == "questionnaire_page" && behavior_.answer_questionnaire &&
      m.body.at("index").get<int>() + 1 == m.body.at("count").get<int>()) {
    return act(client::QuestionnaireAnswers{behavior_.questionnaire.value_or(default_questionnaire_answers(labeling_))});
  }
  return {};
}

HarnessRun run_session(const SessionConfig& config, const std::vector<std::string>& roster,
                       const HarnessOptions& options) {
  InlineExecutor executor;
  SessionOptions so;
  so.log_path = options.log_path;
  so.retry.sleep = [](std::chrono::milliseconds) {};
  game::EpochMs now = options.start;
  Session session(options.session_id, config, roster, options.backend, executor, now, so);

  std::map<std::string, ScriptedClient> clients;
  for (const auto& p : roster) {
    const auto it = options.per_participant.find(p);
    clients.emplace(p, ScriptedClient(p, it != options.per_participant.end() ? it->second : options.behavior, config));
  }

  // Pending client actions ordered by (time, insertion).
  using Pending = std::tuple<game::EpochMs, std::uint64_t, std::string, ClientAction>;
  auto later = [](const Pending& a, const Pending& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) > std::tie(std::get<0>(b), std::get<1>(b));
  };
  std::priority_queue<Pending, std::vector<Pending>, decltype(later)> pending(later);
  std::uint64_t order = 0;

  const auto route = [&] {
    for (auto& out : session.drain_outbox()) {
      for (auto& action : clients.at(out.participant).react(out.message, now)) {
        pending.emplace(action.at, order++, out.participant, std::move(action));
      }
    }
  };

  for (const auto& p : roster) session.post(p, ClientMessage{std::nullopt, client::Join{"scripted"}});
  session.pump(now);
  session.start(now);
  route();

  while (session.phase() != Phase::Complete) {
    std::optional<game::EpochMs> next = session.next_deadline();
    if (!pending.empty() && (!next || std::get<0>(pending.top()) < *next)) next = std::get<0>(pending.top());
    if (!next) throw Error(Errc::SessionIncomplete, "session stalled in phase " + std::string(to_string(session.phase())));
    if (options.tick.count() > 0) {
      const auto t = options.tick.count();
      const auto offset = std::max<game::EpochMs>(*next - options.start, 0);
      next = options.start + (offset + t - 1) / t * t;
    }
    now = std::max(now, *next);
    while (!pending.empty() && std::get<0>(pending.top()) <= now) {
      auto [at, seq, who, action] = pending.top();
      pending.pop();
      if (action.disconnect) {
        session.post_disconnect(who);
      } else {
        session.post(who, std::move(*action.message));
      }
    }
    session.pump(now);
    route();
  }

  HarnessRun run;
  run.result = session.result();
  run.events = session.events();
  for (const auto& [p, c] : clients) run.received[p] = c.received();
  return run;
}

}  // namespace pdlab::session
