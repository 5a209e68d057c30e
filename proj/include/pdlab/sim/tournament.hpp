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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdlab/agent/backend.hpp"
#include "pdlab/agent/mock_backend.hpp"
#include "pdlab/agent/persona.hpp"
#include "pdlab/game/payoff.hpp"

namespace pdlab::sim {

struct Matchup {
  agent::PersonaKind persona_a = agent::PersonaKind::Fair;
  agent::PersonaKind persona_b = agent::PersonaKind::Selfish;
  int group_size = 10;
  int repeats = 5;
  int rounds = 10;
  std::string backend_id = "mock";
  std::uint64_t seed = 1;

  // "fair:selfish"
  std::string id() const;
  bool self_play() const { return persona_a == persona_b; }
  // Records each group takes part in: repeats x rounds x group_size.
  int samples_per_group() const { return repeats * rounds * group_size; }
};

// Parses "fair:selfish" into the two personas. Throws Error{InvalidArgument}.
std::pair<agent::PersonaKind, agent::PersonaKind> parse_matchup(const std::string& text);

// One pair's round. Slot a is always the member of group a.
struct SimRecord {
  std::string matchup;
  std::string backend;
  int repeat = 1;
  int round = 1;
  int pair = 0;
  std::array<std::string, 2> agents;
  std::array<agent::PersonaKind, 2> personas{};
  // [a first, b first, a second, b second]
  std::array<std::string, 4> messages;
  std::array<game::Choice, 2> choices{};
  std::array<game::Points, 2> payoffs{};
  // Decision drawn at random because the completion carried none.
  std::array<bool, 2> decision_fallback{};
  std::optional<bool> agreement;
  std::optional<std::array<bool, 2>> breach;

  bool operator==(const SimRecord&) const = default;
};

nlohmann::json to_json(const SimRecord& r);
// Throws Error{SchemaError}.
SimRecord record_from_json(const nlohmann::json& j);
std::string to_line(const SimRecord& r);
// Reads a line-delimited record file. Throws Error{IoError} or Error{SchemaError}.
std::vector<SimRecord> read_records(const std::filesystem::path& path);

// True when the message asks for A from both sides: it names choice A as a
// standalone letter and never names B.
bool proposes_mutual_a(const std::string& message);
// Rule-based agreement: each agent sent at least one message proposing mutual A.
bool detect_agreement(const SimRecord& r);
// Fills agreement and breach flags from detect_agreement.
void annotate(SimRecord& r);

struct RunOptions {
  // Records go to out_dir/<backend>/<matchup>.jsonl, with a cursor file next
  // to it, when set.
  std::optional<std::filesystem::path> out_dir;
  // Continue from an existing record file instead of starting over.
  bool resume = false;
  // Threads running the pairs of a round; 1 runs them inline.
  unsigned workers = 4;
  // Minimum spacing between backend requests; zero disables limiting.
  std::chrono::milliseconds min_request_interval{0};
  std::string example_dialogues;
  game::PayoffMatrix payoff;
  std::string params_json = "{}";
  std::chrono::milliseconds timeout{60'000};
  int max_retries = 2;
  agent::RetryPolicy retry;
  // Apply rule-based agreement and breach detection to every record.
  bool detect_agreement = true;
};

struct ResumeCursor {
  int repeat = 1;
  int round = 1;
  bool done = false;

  bool operator==(const ResumeCursor&) const = default;
};

std::filesystem::path records_path(const std::filesystem::path& out_dir, const Matchup& m);
std::filesystem::path cursor_path(const std::filesystem::path& out_dir, const Matchup& m);
// A missing cursor file reads as the start of the run.
ResumeCursor read_cursor(const std::filesystem::path& path);

// Plays the matchup: for every repeat a fresh bipartite schedule between two
// groups of group_size agents, agents keeping their own history within the
// repeat and starting empty in the next. Records come back ordered by
// (repeat, round, pair) and are checkpointed after each round. Throws
// Error{TooManyRounds} when rounds > group_size and Error{BackendUnavailable}
// once the backend gives up; completed rounds stay on disk and the cursor
// points at the first missing round.
std::vector<SimRecord> run_matchup(const Matchup& m, agent::Backend& backend, const RunOptions& options = {});

struct Fraction {
  long num = 0;
  long den = 0;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Fraction&) const = default;
};

// Behavior of agents of `persona` facing `opponent` within one backend.
struct SummaryRow {
  std::string backend;
  agent::PersonaKind persona{};
  agent::PersonaKind opponent{};
  Fraction cooperation;
  // Absent when no record carries an agreement flag.
  std::optional<Fraction> agreement;
  // Breaches over agreements; absent when there were no agreements.
  std::optional<Fraction> breach;

  bool operator==(const SummaryRow&) const = default;
};

struct SummaryTable {
  std::vector<SummaryRow> rows;  // sorted by (backend, persona, opponent)

  const SummaryRow* find(const std::string& backend, agent::PersonaKind persona, agent::PersonaKind opponent) const;
  std::string to_csv() const;
};

// Every record counts once for each of its two agents. Buckets without
// observations do not produce rows.
SummaryTable aggregate(const std::vector<SimRecord>& records);

// Orderings that the default mock policies produce: within each backend,
// every Cooperative row cooperates more than every Fair row, which
// cooperates more than every Selfish row; breach rates order Selfish > Fair
// >= Cooperative the same way. Returns a description of the first violation.
std::optional<std::string> check_persona_orderings(const SummaryTable& table);

struct NamedBackend {
  std::string id;
  agent::Backend* backend = nullptr;
};

struct MatchupRun {
  Matchup matchup;
  std::vector<SimRecord> records;
};

struct BackendResults {
  std::string backend;
  std::vector<MatchupRun> matchups;
  SummaryTable summary;
};

// The three cross-persona matchups followed by the three self-plays.
std::vector<Matchup> roster_matchups(const Matchup& base);

// Runs roster_matchups(base) on each backend separately; agents of
// different backends never meet. `base` supplies sizes and the seed.
std::vector<BackendResults> run_roster(const std::vector<NamedBackend>& backends, const Matchup& base,
                                       const RunOptions& options = {});

}  // namespace pdlab::sim
