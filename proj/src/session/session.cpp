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

#include "pdlab/session/session.hpp"

#include <algorithm>
#include <set>

#include "pdlab/agent/http_backend.hpp"
#include "pdlab/agent/mock_backend.hpp"
#include "pdlab/error.hpp"

namespace pdlab::session {

using nlohmann::json;
using game::Stage;

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Lobby: return "lobby";
    case Phase::Quiz: return "quiz";
    case Phase::Rounds: return "rounds";
    case Phase::Questionnaire: return "questionnaire";
    case Phase::Complete: return "complete";
  }
  return "?";
}

std::shared_ptr<agent::Backend> make_backend(const AgentConfig& config, std::uint64_t seed) {
  if (config.backend == "http") return std::make_shared<agent::HttpChatBackend>(config.http);
  return std::make_shared<agent::MockBackend>(seed, config.mock);
}

struct Session::AgentSlot {
  AgentSlot(std::string id, agent::PersonaKind persona) : state(std::move(id), persona) {}

  std::mutex mu;  // held while a completion task runs
  agent::AgentState state;
  std::unique_ptr<agent::AgentRunner> runner;
  std::mutex pending_mu;
  std::vector<agent::HistoryEntry> pending;  // results not yet folded into state
  int prepared_round = 0;
};

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::ConfigInvalid, what); }

int message_slot(Stage s) {
  if (s == Stage::Msg1Compose || s == Stage::Msg1Read) return 1;
  if (s == Stage::Msg2Compose || s == Stage::Msg2Read) return 2;
  return 0;
}

std::string agent_id(std::size_t index) {
  std::string n = std::to_string(index + 1);
  if (n.size() < 2) n.insert(0, 1, '0');
  return "agent-" + n;
}

}  // namespace

Session::Session(std::string id, SessionConfig config, std::vector<std::string> roster,
                 std::shared_ptr<agent::Backend> backend, AgentExecutor& executor, game::EpochMs now,
                 SessionOptions options)
    : id_(std::move(id)),
      config_(std::move(config)),
      rules_(config_.round_rules()),
      roster_(std::move(roster)),
      backend_(std::move(backend)),
      executor_(executor),
      options_(std::move(options)),
      rng_(game::mix_seed(config_.seed, 0x5e55)),
      log_(id_, options_.log_path) {
  validate(config_);
  if (roster_.empty()) invalid("roster is empty");
  std::set<std::string> unique;
  for (const auto& p : roster_) {
    if (p.empty()) invalid("participant ids must not be empty");
    if (!unique.insert(p).second) invalid("duplicate participant id '" + p + "'");
  }
  const int n = static_cast<int>(roster_.size());
  const auto persona = agent_persona(config_.treatment.pairing);
  if (!persona) {
    if (n % 2 != 0) invalid("an HH session needs an even roster");
    if (config_.rounds > n - 1) {
      invalid(std::to_string(n) + " participants cannot play " + std::to_string(config_.rounds) +
              " rounds without meeting an associate twice");
    }
    schedule_ = game::build_schedule(n, config_.rounds, game::mix_seed(config_.seed, 1));
  }
  for (const auto& p : roster_) {
    Human h;
    h.id = p;
    humans_.push_back(std::move(h));
  }

  std::vector<std::string> agent_ids;
  if (persona) {
    if (!backend_) backend_ = make_backend(config_.agent, game::mix_seed(config_.seed, 2));
    agent::AgentSettings settings;
    settings.example_dialogues = config_.agent.example_dialogues;
    settings.payoff = config_.payoff;
    settings.params_json = config_.agent.params_json;
    settings.timeout = config_.agent.timeout;
    settings.max_retries = config_.agent.max_retries;
    settings.retry = options_.retry;
    for (std::size_t i = 0; i < humans_.size(); ++i) {
      auto slot = std::make_unique<AgentSlot>(agent_id(i), *persona);
      slot->runner = std::make_unique<agent::AgentRunner>(slot->state, *backend_, settings, agent::PromptSet::builtin(),
                                                          [this](const agent::CompletionAttempt& a) { enqueue(a); });
      agent_ids.push_back(slot->state.id());
      agents_.push_back(std::move(slot));
    }
  }
  log(now, EventKind::SessionCreated,
      {{"config", to_json(config_)},
       {"roster", roster_},
       {"agents", agent_ids},
       {"backend", backend_ ? backend_->id() : std::string()}});
}

Session::~Session() {
  std::unique_lock lk(inflight_mu_);
  inflight_cv_.wait(lk, [this] { return inflight_.load() == 0; });
}

void Session::enqueue(Input in) {
  std::function<void()> wake;
  {
    std::lock_guard lk(mailbox_mu_);
    mailbox_.push_back(std::move(in));
    wake = wakeup_;
  }
  if (wake) wake();
}

void Session::post(const std::string& participant, ClientMessage message) {
  enqueue(ClientInput{participant, std::move(message)});
}

void Session::post_disconnect(const std::string& participant) { enqueue(Disconnect{participant}); }

void Session::set_wakeup(std::function<void()> wakeup) {
  std::lock_guard lk(mailbox_mu_);
  wakeup_ = std::move(wakeup);
}

void Session::start(game::EpochMs) {
  std::lock_guard lk(mu_);
  if (phase_ != Phase::Lobby) throw Error(Errc::IllegalEvent, "session already started");
  phase_ = Phase::Quiz;
  for (std::size_t h = 0; h < humans_.size(); ++h) send_quiz(static_cast<int>(h));
}

void Session::pump(game::EpochMs now) {
  std::lock_guard lk(mu_);
  while (process_one(now) || fire_due_timer(now)) {
  }
}

bool Session::process_one(game::EpochMs now) {
  Input in;
  {
    std::lock_guard lk(mailbox_mu_);
    if (mailbox_.empty()) return false;
    in = std::move(mailbox_.front());
    mailbox_.pop_front();
  }
  std::visit([&](const auto& v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Disconnect>) {
      for (auto& h : humans_) {
        if (h.id == v.participant && h.connected) {
          h.connected = false;
          log(now, EventKind::ParticipantDisconnected,
              {{"participant", h.id}, {"phase", to_string(phase_)}, {"round", round_}});
        }
      }
    } else {
      handle(v, now);
    }
  }, in);
  return true;
}

bool Session::fire_due_timer(game::EpochMs now) {
  if (phase_ == Phase::Rounds) {
    int due = -1;
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      const auto& p = pairs_[i];
      if (p.done || p.state.deadline > now) continue;
      if (due < 0 || p.state.deadline < pairs_[due].state.deadline) due = static_cast<int>(i);
    }
    if (due < 0) return false;
    apply(due, game::event::TimerExpired{pairs_[due].state.deadline}, now);
    return true;
  }
  if (phase_ == Phase::Questionnaire && questionnaire_deadline_ && *questionnaire_deadline_ <= now) {
    finish_session(now);
    return true;
  }
  return false;
}

std::optional<game::EpochMs> Session::next_deadline() const {
  std::lock_guard lk(mu_);
  std::optional<game::EpochMs> next;
  if (phase_ == Phase::Rounds) {
    for (const auto& p : pairs_) {
      if (!p.done && (!next || p.state.deadline < *next)) next = p.state.deadline;
    }
  } else if (phase_ == Phase::Questionnaire) {
    next = questionnaire_deadline_;
  }
  return next;
}

Phase Session::phase() const {
  std::lock_guard lk(mu_);
  return phase_;
}

std::vector<Outgoing> Session::drain_outbox() {
  std::lock_guard lk(mu_);
  return std::exchange(outbox_, {});
}

std::vector<EventRecord> Session::events() const {
  std::lock_guard lk(mu_);
  return log_.records();
}

void Session::send(int human, ServerMessage m) { outbox_.push_back({humans_[human].id, std::move(m)}); }

void Session::log(game::EpochMs at, EventKind kind, json payload) { log_.append(at, kind, std::move(payload)); }

std::string Session::seat_id(const Pair& p, int seat) const {
  return p.human[seat] >= 0 ? humans_[p.human[seat]].id : agents_[p.agent[seat]]->state.id();
}

void Session::send_quiz(int human) {
  send(human, server::instructions(instruction_text(config_)));
  json items = json::array();
  for (const auto& q : quiz_items(config_)) {
    items.push_back({{"id", q.id}, {"question", q.question}, {"options", q.options}});
  }
  send(human, server::quiz(items));
}

void Session::handle(const ClientInput& in, game::EpochMs now) {
  const auto it = std::find_if(humans_.begin(), humans_.end(), [&](const Human& h) { return h.id == in.participant; });
  if (it == humans_.end()) return;
  const int hi = static_cast<int>(it - humans_.begin());
  Human& h = *it;
  const auto& ref = in.message.id;
  const auto closed = [&](const std::string& why) {
    send(hi, server::error(to_string(Errc::StageClosed), why, ref));
  };

  try {
    std::visit(
        [&](const auto& body) {
          using T = std::decay_t<decltype(body)>;
          if constexpr (std::is_same_v<T, client::Join>) {
            h.connected = true;
            log(now, EventKind::ParticipantJoined, {{"participant", h.id}, {"phase", to_string(phase_)}});
            send(hi, server::welcome(now, config_.rounds));
            resync(hi);
          } else if constexpr (std::is_same_v<T, client::QuizAnswers>) {
            if (phase_ != Phase::Quiz || h.quiz_passed) return closed("the quiz is not open");
            ++h.quiz_attempts;
            const bool passed = quiz_gate(body.answers, quiz_items(config_)) == QuizOutcome::Pass;
            log(now, EventKind::QuizAttempt,
                {{"participant", h.id}, {"attempt", h.quiz_attempts}, {"passed", passed}, {"answers", body.answers}});
            send(hi, server::quiz_result(passed, h.quiz_attempts));
            if (!passed) return send_quiz(hi);
            h.quiz_passed = true;
            if (std::all_of(humans_.begin(), humans_.end(), [](const Human& x) { return x.quiz_passed; })) {
              begin_round(1, now);
            }
          } else if constexpr (std::is_same_v<T, client::MessageText>) {
            if (phase_ != Phase::Rounds) return closed("no round in progress");
            const auto& st = pairs_[h.pair].state;
            if (st.stage != Stage::Msg1Compose && st.stage != Stage::Msg2Compose) return closed("messages are closed");
            if (st.message(h.seat, message_slot(st.stage))) return send(hi, server::ack(ref, true));
            apply(h.pair, game::event::SubmitMessage{h.seat, body.text, now}, now);
            send(hi, server::ack(ref));
          } else if constexpr (std::is_same_v<T, client::Choice>) {
            if (phase_ != Phase::Rounds) return closed("no round in progress");
            const auto& st = pairs_[h.pair].state;
            if (st.stage != Stage::Decide) return closed("decisions are closed");
            if (st.choices[h.seat]) return send(hi, server::ack(ref, true));
            apply(h.pair, game::event::SubmitChoice{h.seat, body.choice, now, false}, now);
            send(hi, server::ack(ref));
          } else {
            if (phase_ != Phase::Questionnaire) return closed("the questionnaire is not open");
            if (h.questionnaire) return send(hi, server::ack(ref, true));
            auto r = parse_response(body.response, config_.norm_bins);
            validate(r, config_.treatment.labeling, config_.norm_bins);
            r.participant_id = h.id;
            log(now, EventKind::QuestionnaireSubmitted, {{"participant", h.id}, {"response", to_json(r)}});
            h.questionnaire = std::move(r);
            send(hi, server::ack(ref));
            if (std::all_of(humans_.begin(), humans_.end(), [](const Human& x) { return x.questionnaire.has_value(); })) {
              finish_session(now);
            }
          }
        },
        in.message.body);
  } catch (const Error& e) {
    send(hi, server::error(to_string(e.code()), e.what(), ref));
  }
}

void Session::handle(const AgentDone& done, game::EpochMs now) {
  if (phase_ != Phase::Rounds || done.round != round_) return;
  auto& p = pairs_[done.pair];
  if (p.done || p.state.stage != done.stage) return;  // the stage timed out first
  if (done.stage == Stage::Decide) {
    if (p.state.choices[done.seat]) return;
    if (done.choice) {
      apply(done.pair, game::event::SubmitChoice{done.seat, *done.choice, now, false}, now);
    } else {
      const auto c = game::random_choice(rng_);
      apply(done.pair, game::event::SubmitChoice{done.seat, c, now, true}, now, done.failure);
    }
  } else {
    if (p.state.message(done.seat, message_slot(done.stage))) return;
    apply(done.pair, game::event::SubmitMessage{done.seat, done.text.value_or(""), now}, now, done.failure);
  }
}

void Session::handle(const agent::CompletionAttempt& a, game::EpochMs now) {
  log(now, EventKind::LlmRequest,
      {{"agent", a.caller_id},
       {"backend", a.backend_id},
       {"attempt", a.attempt},
       {"round", round_},
       {"system_prompt", a.system_prompt},
       {"prompt", a.prompt}});
  log(now, EventKind::LlmResponse,
      {{"agent", a.caller_id},
       {"attempt", a.attempt},
       {"response", a.response ? json(*a.response) : json(nullptr)},
       {"error", a.error}});
}

void Session::apply(int pi, const game::StageEvent& ev, game::EpochMs now, const std::string& fallback_reason) {
  Pair& p = pairs_[pi];
  const game::RoundState old = p.state;
  p.state = game::advance(old, ev, rules_, rng_);
  const game::RoundState& st = p.state;

  int submitter = -1;
  if (auto m = std::get_if<game::event::SubmitMessage>(&ev)) submitter = m->seat;
  if (auto c = std::get_if<game::event::SubmitChoice>(&ev)) submitter = c->seat;

  const auto fallback = [&](int seat, const char* kind, const std::string& reason) {
    log(now, EventKind::TimeoutFallback,
        {{"round", st.round_index},
         {"pair", pi},
         {"participant", seat_id(p, seat)},
         {"stage", game::to_string(old.stage)},
         {"kind", kind},
         {"reason", reason}});
  };

  for (std::size_t i = old.messages.size(); i < st.messages.size(); ++i) {
    const auto& m = st.messages[i];
    log(now, EventKind::MessageSent,
        {{"round", st.round_index},
         {"pair", pi},
         {"seat", m.seat},
         {"sender", seat_id(p, m.seat)},
         {"slot", m.slot},
         {"text", m.text},
         {"at", m.at},
         {"timed_out", m.timed_out}});
    if (m.timed_out) {
      fallback(m.seat, "message", "timeout");
    } else if (!fallback_reason.empty() && m.seat == submitter) {
      fallback(m.seat, "message", fallback_reason);
    }
  }
  for (int s = 0; s < 2; ++s) {
    if (old.choices[s] || !st.choices[s]) continue;
    const auto& c = *st.choices[s];
    log(now, EventKind::ChoiceSubmitted,
        {{"round", st.round_index},
         {"pair", pi},
         {"seat", s},
         {"participant", seat_id(p, s)},
         {"choice", game::to_string(c.choice)},
         {"at", c.at},
         {"fallback", c.fallback}});
    if (c.fallback) fallback(s, "choice", s == submitter && !fallback_reason.empty() ? fallback_reason : "timeout");
  }
  if (st.stage != old.stage) enter_stage(pi, now);
}

void Session::enter_stage(int pi, game::EpochMs now) {
  Pair& p = pairs_[pi];
  const game::RoundState& st = p.state;
  log(now, EventKind::StageEnter,
      {{"round", st.round_index},
       {"pair", pi},
       {"stage", game::to_string(st.stage)},
       {"entered", st.stage_entered},
       {"deadline", st.deadline}});

  if (st.stage == Stage::Done) {
    p.done = true;
    PairRound rec;
    rec.round = st.round_index;
    rec.pair = pi;
    for (int s = 0; s < 2; ++s) {
      rec.ids[s] = seat_id(p, s);
      rec.agent[s] = p.agent[s] >= 0;
      rec.choices[s] = *st.choices[s];
      rec.payoffs[s] = (*st.payoffs)[s];
    }
    rec.messages = st.messages;
    interactions_.push_back(std::move(rec));
    if (std::all_of(pairs_.begin(), pairs_.end(), [](const Pair& x) { return x.done; })) finish_round();
    return;
  }

  for (int s = 0; s < 2; ++s) {
    if (p.human[s] >= 0) send(p.human[s], server::stage_enter(st.round_index, st.stage, st.deadline));
  }

  switch (st.stage) {
    case Stage::Msg1Read:
    case Stage::Msg2Read: {
      const int slot = message_slot(st.stage);
      for (int s = 0; s < 2; ++s) {
        const auto* m = st.message(1 - s, slot);
        const std::string text = m ? m->text : std::string();
        log(now, EventKind::MessageDelivered,
            {{"round", st.round_index}, {"pair", pi}, {"slot", slot}, {"to", seat_id(p, s)}, {"from", seat_id(p, 1 - s)}});
        if (p.human[s] >= 0) send(p.human[s], server::message_delivered(st.round_index, slot, text));
      }
      break;
    }
    case Stage::Results: {
      json ids = json::array(), agents = json::array(), choices = json::array(), payoffs = json::array();
      for (int s = 0; s < 2; ++s) {
        ids.push_back(seat_id(p, s));
        agents.push_back(p.agent[s] >= 0);
        choices.push_back(game::to_string(st.choices[s]->choice));
        payoffs.push_back((*st.payoffs)[s]);
      }
      log(now, EventKind::RoundResult,
          {{"round", st.round_index}, {"pair", pi}, {"ids", ids}, {"agent", agents}, {"choices", choices},
           {"payoffs", payoffs}});
      for (int s = 0; s < 2; ++s) {
        const auto own = st.choices[s]->choice;
        const auto other = st.choices[1 - s]->choice;
        const auto own_pay = (*st.payoffs)[s];
        const auto other_pay = (*st.payoffs)[1 - s];
        if (p.human[s] >= 0) {
          Human& h = humans_[p.human[s]];
          h.total += own_pay;
          send(p.human[s], server::round_result(st.round_index, own, own_pay, other, other_pay, h.total,
                                                st.choices[s]->fallback));
        } else {
          auto& slot = *agents_[p.agent[s]];
          std::lock_guard lk(slot.pending_mu);
          slot.pending.push_back({st.round_index, own, other, own_pay, other_pay});
        }
      }
      break;
    }
    case Stage::Msg1Compose:
    case Stage::Msg2Compose:
    case Stage::Decide:
      for (int s = 0; s < 2; ++s) {
        if (p.agent[s] >= 0) dispatch_agent(pi, s);
      }
      break;
    case Stage::Done:
      break;
  }
}

void Session::dispatch_agent(int pi, int seat) {
  const Pair& p = pairs_[pi];
  const game::RoundState& st = p.state;
  AgentSlot& a = *agents_[p.agent[seat]];
  const auto text = [&](int who, int slot) {
    const auto* m = st.message(who, slot);
    return m ? m->text : std::string();
  };
  const agent::RoundMessages msgs{text(seat, 1), text(1 - seat, 1), text(seat, 2), text(1 - seat, 2)};
  const int round = st.round_index;
  const Stage stage = st.stage;
  const bool fresh = config_.agent.memory == AgentMemory::FreshPerRound;

  ++inflight_;
  executor_.submit([this, &a, pi, seat, round, stage, msgs, fresh] {
    AgentDone done;
    done.round = round;
    done.pair = pi;
    done.seat = seat;
    done.stage = stage;
    {
      std::lock_guard lk(a.mu);
      {
        std::lock_guard pk(a.pending_mu);
        if (fresh) {
          if (a.prepared_round != round) a.state = agent::AgentState(a.state.id(), a.state.persona());
          a.pending.clear();
        } else {
          for (const auto& h : a.pending) a.state.record_round(h);
          a.pending.clear();
        }
        a.prepared_round = round;
      }
      try {
        if (stage == Stage::Decide) {
          auto turn = a.runner->decide(msgs, round);
          done.choice = turn.choice;
          if (!turn.choice) done.failure = "no_decision";
        } else {
          auto turn = stage == Stage::Msg1Compose ? a.runner->first_message(round)
                                                  : a.runner->second_message(msgs.own_first, msgs.associate_first);
          done.text = turn.text;
          if (turn.fallback) done.failure = "no_bracketed_message";
        }
      } catch (const Error& e) {
        done.failure = e.code() == Errc::BackendUnavailable ? "backend_unavailable" : "agent_error";
      } catch (const std::exception&) {
        done.failure = "agent_error";
      }
    }
    enqueue(std::move(done));
    std::lock_guard lk(inflight_mu_);
    --inflight_;
    inflight_cv_.notify_all();
  });
}

void Session::begin_round(int round, game::EpochMs at) {
  phase_ = Phase::Rounds;
  round_ = round;
  pairs_.clear();
  if (schedule_) {
    for (const auto& pr : schedule_->pairings[round - 1]) {
      Pair p;
      p.human = {pr.first, pr.second};
      pairs_.push_back(p);
    }
  } else {
    for (std::size_t i = 0; i < humans_.size(); ++i) {
      Pair p;
      p.human = {static_cast<int>(i), -1};
      p.agent = {-1, static_cast<int>(i)};
      pairs_.push_back(p);
    }
  }
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    pairs_[i].state = game::begin_round(round, rules_, at);
    for (int s = 0; s < 2; ++s) {
      if (pairs_[i].human[s] >= 0) {
        humans_[pairs_[i].human[s]].pair = static_cast<int>(i);
        humans_[pairs_[i].human[s]].seat = s;
      }
    }
  }
  for (std::size_t i = 0; i < pairs_.size(); ++i) enter_stage(static_cast<int>(i), at);
}

void Session::finish_round() {
  // The next phase starts when the slowest pair finished, on the stage clock.
  game::EpochMs at = 0;
  for (const auto& p : pairs_) at = std::max(at, p.state.stage_entered);
  if (round_ < config_.rounds) {
    begin_round(round_ + 1, at);
  } else {
    begin_questionnaire(at);
  }
}

std::vector<std::string> Session::questionnaire_pages() const {
  std::vector<std::string> pages;
  for (const auto& page : config_.questionnaire_battery) {
    if (page == "humanness" && config_.treatment.labeling != Labeling::Uninformed) continue;
    pages.push_back(page);
  }
  return pages;
}

void Session::begin_questionnaire(game::EpochMs at) {
  phase_ = Phase::Questionnaire;
  questionnaire_deadline_ = at + config_.questionnaire_timeout.count();
  for (std::size_t h = 0; h < humans_.size(); ++h) resync(static_cast<int>(h));
}

void Session::finish_session(game::EpochMs now) {
  phase_ = Phase::Complete;
  questionnaire_deadline_.reset();

  // Cooperation counts per human seat over every round.
  std::vector<long> coop(humans_.size()), total(humans_.size());
  for (const auto& rec : interactions_) {
    for (int s = 0; s < 2; ++s) {
      if (rec.agent[s]) continue;
      const auto idx = std::find(roster_.begin(), roster_.end(), rec.ids[s]) - roster_.begin();
      ++total[idx];
      coop[idx] += rec.choices[s].choice == game::Choice::A;
    }
  }
  for (std::size_t i = 0; i < humans_.size(); ++i) {
    Human& h = humans_[i];
    long c = 0, t = 0;
    for (std::size_t j = 0; j < humans_.size(); ++j) {
      if (j == i && humans_.size() > 1) continue;
      c += coop[j];
      t += total[j];
    }
    const double realized = t > 0 ? static_cast<double>(c) / static_cast<double>(t) : 0.0;
    h.norm_correct = h.questionnaire && grade_norm_estimate(h.questionnaire->norm_estimate, realized);
    h.payout = compute_payout(h.total, h.norm_correct ? 1 : 0, config_);
    log(now, EventKind::PayoutComputed,
        {{"participant", h.id},
         {"total_points", h.total},
         {"norm_correct", h.norm_correct},
         {"realized_rate", realized},
         {"amount", h.payout.to_string()},
         {"cents", h.payout.cents}});
  }
  log(now, EventKind::SessionComplete, {{"participants", humans_.size()}});
  for (std::size_t h = 0; h < humans_.size(); ++h) resync(static_cast<int>(h));
}

void Session::resync(int hi) {
  const Human& h = humans_[hi];
  switch (phase_) {
    case Phase::Lobby:
      break;
    case Phase::Quiz:
      if (!h.quiz_passed) send_quiz(hi);
      break;
    case Phase::Rounds: {
      const auto& st = pairs_[h.pair].state;
      if (st.stage == Stage::Done) break;
      send(hi, server::stage_enter(st.round_index, st.stage, st.deadline));
      for (int slot = 1; slot <= 2; ++slot) {
        const Stage read = slot == 1 ? Stage::Msg1Read : Stage::Msg2Read;
        if (st.stage < read) continue;
        const auto* m = st.message(1 - h.seat, slot);
        send(hi, server::message_delivered(st.round_index, slot, m ? m->text : std::string()));
      }
      if (st.stage == Stage::Results) {
        const auto& own = *st.choices[h.seat];
        const auto& other = *st.choices[1 - h.seat];
        send(hi, server::round_result(st.round_index, own.choice, (*st.payoffs)[h.seat], other.choice,
                                      (*st.payoffs)[1 - h.seat], h.total, own.fallback));
      }
      break;
    }
    case Phase::Questionnaire: {
      if (h.questionnaire) break;
      const auto pages = questionnaire_pages();
      for (std::size_t i = 0; i < pages.size(); ++i) {
        send(hi, server::questionnaire_page(static_cast<int>(i), static_cast<int>(pages.size()),
                                            questionnaire_page(pages[i], config_), *questionnaire_deadline_));
      }
      break;
    }
    case Phase::Complete:
      send(hi, server::payout(h.payout.to_string(), config_.currency));
      send(hi, server::session_complete());
      break;
  }
}

SessionResult Session::result() const {
  std::lock_guard lk(mu_);
  SessionResult r;
  r.session_id = id_;
  r.treatment = config_.treatment;
  r.rounds = config_.rounds;
  r.currency = config_.currency;
  r.interactions = interactions_;
  std::sort(r.interactions.begin(), r.interactions.end(),
            [](const PairRound& a, const PairRound& b) { return std::tie(a.round, a.pair) < std::tie(b.round, b.pair); });
  for (const auto& h : humans_) {
    r.participants.push_back({h.id, h.quiz_attempts, h.total, h.questionnaire, h.norm_correct, h.payout});
  }
  r.complete = phase_ == Phase::Complete;
  return r;
}

json Session::status() const {
  std::lock_guard lk(mu_);
  json people = json::array();
  for (const auto& h : humans_) {
    people.push_back({{"id", h.id},
                      {"connected", h.connected},
                      {"quiz_passed", h.quiz_passed},
                      {"total_points", h.total},
                      {"questionnaire", h.questionnaire.has_value()}});
  }
  return {{"session_id", id_},
          {"phase", to_string(phase_)},
          {"round", round_},
          {"rounds", config_.rounds},
          {"treatment",
           {{"pairing", to_string(config_.treatment.pairing)},
            {"labeling", to_string(config_.treatment.labeling)},
            {"communication", config_.treatment.communication}}},
          {"participants", people},
          {"events", log_.records().size()}};
}

}  // namespace pdlab::session
