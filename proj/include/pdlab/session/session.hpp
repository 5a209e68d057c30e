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
#include <atomic>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pdlab/agent/agent_runner.hpp"
#include "pdlab/game/schedule.hpp"
#include "pdlab/session/config.hpp"
#include "pdlab/session/events.hpp"
#include "pdlab/session/protocol.hpp"
#include "pdlab/session/questionnaire.hpp"

namespace pdlab::session {

// One pair's completed round as stored in a SessionResult.
struct PairRound {
  int round = 0;
  int pair = 0;
  std::array<std::string, 2> ids;
  std::array<bool, 2> agent{};
  std::vector<game::RoundMessage> messages;
  std::array<game::ChoiceEntry, 2> choices{};
  std::array<game::Points, 2> payoffs{};
  bool operator==(const PairRound&) const = default;
};

struct ParticipantResult {
  std::string id;
  int quiz_attempts = 0;
  long total_points = 0;
  std::optional<QuestionnaireResponse> questionnaire;
  bool norm_correct = false;
  Money payout;
  bool operator==(const ParticipantResult&) const = default;
};

struct SessionResult {
  std::string session_id;
  Treatment treatment;
  int rounds = 0;
  std::string currency;
  std::vector<PairRound> interactions;  // ordered by (round, pair)
  std::vector<ParticipantResult> participants;  // roster order
  bool complete = false;
  bool operator==(const SessionResult&) const = default;
};

// Rebuilds a SessionResult from a session's event records alone.
SessionResult replay(const std::vector<EventRecord>& records);

// Runs agent completions. Tasks must not touch session state; they report
// back through Session::post.
class AgentExecutor {
 public:
  virtual ~AgentExecutor() = default;
  virtual void submit(std::function<void()> task) = 0;
};

// Runs each task immediately on the submitting thread.
class InlineExecutor : public AgentExecutor {
 public:
  void submit(std::function<void()> task) override { task(); }
};

// Fixed-size worker pool.
class PoolExecutor : public AgentExecutor {
 public:
  explicit PoolExecutor(std::size_t threads);
  ~PoolExecutor() override;
  void submit(std::function<void()> task) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::shared_ptr<agent::Backend> make_backend(const AgentConfig& config, std::uint64_t seed);

enum class Phase { Lobby, Quiz, Rounds, Questionnaire, Complete };
std::string_view to_string(Phase p);

struct Outgoing {
  std::string participant;
  ServerMessage message;
};

struct SessionOptions {
  std::optional<std::filesystem::path> log_path;
  // Backoff between agent transport retries; an empty sleep blocks the worker.
  agent::RetryPolicy retry;
};

// A session is an actor: inputs are queued with post() from any thread and
// applied in order by pump(), which also fires due stage timers. Clock time
// is always passed in. Messages for participants accumulate in an outbox.
class Session {
 public:
  // Throws Error{ConfigInvalid} for an empty or duplicate roster, an odd
  // roster or too many rounds under HH.
  Session(std::string id, SessionConfig config, std::vector<std::string> roster,
          std::shared_ptr<agent::Backend> backend, AgentExecutor& executor, game::EpochMs now,
          SessionOptions options = {});
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  void post(const std::string& participant, ClientMessage message);
  void post_disconnect(const std::string& participant);
  // Called after anything is posted; lets a server schedule a pump.
  void set_wakeup(std::function<void()> wakeup);

  // Moves from Lobby to the instruction quiz. Throws Error{IllegalEvent}
  // outside Lobby.
  void start(game::EpochMs now);
  void pump(game::EpochMs now);

  std::vector<Outgoing> drain_outbox();
  std::optional<game::EpochMs> next_deadline() const;
  Phase phase() const;
  const std::string& id() const { return id_; }
  const SessionConfig& config() const { return config_; }
  const std::vector<std::string>& roster() const { return roster_; }
  SessionResult result() const;
  std::vector<EventRecord> events() const;
  nlohmann::json status() const;
  // Agent tasks submitted but not yet reported back.
  int inflight() const { return inflight_.load(); }

 private:
  struct AgentSlot;
  struct Human {
    std::string id;
    bool connected = false;
    bool quiz_passed = false;
    int quiz_attempts = 0;
    long total = 0;
    int pair = -1;
    int seat = 0;
    std::optional<QuestionnaireResponse> questionnaire;
    bool norm_correct = false;
    Money payout;
  };
  struct Pair {
    std::array<int, 2> human{-1, -1};  // index into humans_, or -1 for an agent seat
    std::array<int, 2> agent{-1, -1};
    game::RoundState state;
    bool done = false;
  };
  struct AgentDone {
    int round = 0;
    int pair = 0;
    int seat = 0;
    game::Stage stage = game::Stage::Done;
    std::optional<std::string> text;
    std::optional<game::Choice> choice;
    std::string failure;  // empty, or why the agent produced nothing usable
  };
  struct ClientInput {
    std::string participant;
    ClientMessage message;
  };
  struct Disconnect {
    std::string participant;
  };
  using Input = std::variant<ClientInput, Disconnect, AgentDone, agent::CompletionAttempt>;

  void enqueue(Input in);
  bool process_one(game::EpochMs now);
  bool fire_due_timer(game::EpochMs now);
  void handle(const ClientInput& in, game::EpochMs now);
  void handle(const AgentDone& done, game::EpochMs now);
  void handle(const agent::CompletionAttempt& attempt, game::EpochMs now);

  void send(int human, ServerMessage m);
  void log(game::EpochMs at, EventKind kind, nlohmann::json payload);
  std::string seat_id(const Pair& p, int seat) const;

  void send_quiz(int human);
  void begin_rounds(game::EpochMs at);
  void begin_round(int round, game::EpochMs at);
  void apply(int pair, const game::StageEvent& ev, game::EpochMs at, const std::string& fallback_reason = {});
  void enter_stage(int pair, game::EpochMs at);
  void dispatch_agent(int pair, int seat);
  void finish_round();
  void begin_questionnaire(game::EpochMs at);
  void finish_session(game::EpochMs at);
  void resync(int human);
  std::vector<std::string> questionnaire_pages() const;

  std::string id_;
  SessionConfig config_;
  game::RoundRules rules_;
  std::vector<std::string> roster_;
  std::shared_ptr<agent::Backend> backend_;
  AgentExecutor& executor_;
  SessionOptions options_;

  mutable std::mutex mu_;  // guards everything below except the mailbox
  Phase phase_ = Phase::Lobby;
  game::Rng rng_;
  std::optional<game::PairSchedule> schedule_;
  std::vector<Human> humans_;
  std::vector<std::unique_ptr<AgentSlot>> agents_;
  std::vector<Pair> pairs_;
  int round_ = 0;
  std::optional<game::EpochMs> questionnaire_deadline_;
  std::vector<PairRound> interactions_;
  EventLog log_;
  std::vector<Outgoing> outbox_;

  std::mutex mailbox_mu_;
  std::deque<Input> mailbox_;
  std::function<void()> wakeup_;

  std::atomic<int> inflight_{0};
  std::mutex inflight_mu_;
  std::condition_variable inflight_cv_;
};

}  // namespace pdlab::session
