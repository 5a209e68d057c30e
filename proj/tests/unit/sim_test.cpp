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
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "doctest.h"
#include "pdlab/agent/parse.hpp"
#include "pdlab/game/rng.hpp"
#include "pdlab/sim/tournament.hpp"
#include "test_util.hpp"

using namespace pdlab;
using namespace pdlab::sim;
using agent::PersonaKind;
using game::Choice;
using pdlab::testing::throws_code;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("pdlab_sim_" + name);
  std::filesystem::remove_all(d);
  return d;
}

Matchup small(PersonaKind a, PersonaKind b, int g, int rounds, int repeats, std::uint64_t seed = 1) {
  Matchup m;
  m.persona_a = a;
  m.persona_b = b;
  m.group_size = g;
  m.rounds = rounds;
  m.repeats = repeats;
  m.seed = seed;
  return m;
}

// Records every request it forwards.
class RecordingBackend : public agent::Backend {
 public:
  explicit RecordingBackend(agent::Backend& inner) : inner_(inner) {}
  std::string id() const override { return inner_.id(); }
  std::string send(const agent::CompletionRequest& r) override {
    std::lock_guard lk(mu_);
    calls.emplace_back(r.caller_id, r.prompt);
    return inner_.send(r);
  }
  std::vector<std::pair<std::string, std::string>> calls;

 private:
  agent::Backend& inner_;
  std::mutex mu_;
};

// Fails every request after the first `budget` ones.
class ExhaustingBackend : public agent::Backend {
 public:
  ExhaustingBackend(agent::Backend& inner, int budget) : inner_(inner), left_(budget) {}
  std::string id() const override { return inner_.id(); }
  std::string send(const agent::CompletionRequest& r) override {
    if (left_.fetch_sub(1) <= 0) throw agent::TransportError("quota exhausted");
    return inner_.send(r);
  }

 private:
  agent::Backend& inner_;
  std::atomic<int> left_;
};

// A completion that never carries a decision.
class MuteDecisionBackend : public agent::Backend {
 public:
  explicit MuteDecisionBackend(agent::Backend& inner) : inner_(inner) {}
  std::string id() const override { return inner_.id(); }
  std::string send(const agent::CompletionRequest& r) override {
    auto text = inner_.send(r);
    return agent::find_decision(text) ? "I cannot decide." : text;
  }

 private:
  agent::Backend& inner_;
};

RunOptions quiet(unsigned workers = 1) {
  RunOptions o;
  o.workers = workers;
  o.retry.sleep = [](std::chrono::milliseconds) {};
  return o;
}

SimRecord plain(PersonaKind pa, PersonaKind pb, Choice ca, Choice cb) {
  SimRecord r;
  r.matchup = "x";
  r.backend = "mock";
  r.personas = {pa, pb};
  r.choices = {ca, cb};
  r.agents = {"a", "b"};
  return r;
}

}  // namespace

TEST_CASE("matchup naming and sample accounting formula") {
  Matchup m;
  CHECK(m.id() == "fair:selfish");
  CHECK(m.samples_per_group() == 500);
  CHECK(parse_matchup("cooperative:selfish") == std::pair{PersonaKind::Cooperative, PersonaKind::Selfish});
  CHECK(throws_code([] { parse_matchup("fair"); }, Errc::InvalidArgument));
  CHECK(throws_code([] { parse_matchup("fair:greedy"); }, Errc::InvalidArgument));
}

TEST_CASE("rule-based proposal detection") {
  CHECK(proposes_mutual_a("我们一起选A吧，双赢！"));
  CHECK(proposes_mutual_a("Let's both pick A."));
  CHECK(proposes_mutual_a("都选Ａ"));
  CHECK_FALSE(proposes_mutual_a("I will choose B."));
  CHECK_FALSE(proposes_mutual_a("A for you, B for me"));
  CHECK_FALSE(proposes_mutual_a("ABBA is a band"));
  CHECK_FALSE(proposes_mutual_a("Hello there"));
  CHECK_FALSE(proposes_mutual_a(""));

  SimRecord r = plain(PersonaKind::Fair, PersonaKind::Fair, Choice::A, Choice::B);
  r.messages = {"选A", "hi", "ok", "好的，选A"};
  CHECK(detect_agreement(r));
  annotate(r);
  CHECK(*r.agreement);
  CHECK(*r.breach == std::array{false, true});
  r.messages = {"选A", "hi", "ok", "no"};
  annotate(r);
  CHECK_FALSE(*r.agreement);
  CHECK(*r.breach == std::array{false, false});
}

TEST_CASE("fair self-play with two agents per group covers all cross pairs") {
  agent::MockBackend mock(5);
  const auto m = small(PersonaKind::Fair, PersonaKind::Fair, 2, 2, 1);
  const auto recs = run_matchup(m, mock, quiet());
  REQUIRE(recs.size() == 4);
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& r : recs) pairs.insert({r.agents[0], r.agents[1]});
  CHECK(pairs == std::set<std::pair<std::string, std::string>>{
                     {"fair-a01", "fair-b01"}, {"fair-a01", "fair-b02"}, {"fair-a02", "fair-b01"}, {"fair-a02", "fair-b02"}});
}

TEST_CASE("more rounds than opponents is rejected") {
  agent::MockBackend mock(1);
  auto m = small(PersonaKind::Fair, PersonaKind::Selfish, 10, 11, 1);
  CHECK(throws_code([&] { run_matchup(m, mock, quiet()); }, Errc::TooManyRounds));
}

TEST_CASE("default matchup yields 500 records per group with pinned persona rates") {
  agent::MockBackend mock(11);
  Matchup m;
  m.persona_a = PersonaKind::Cooperative;
  m.persona_b = PersonaKind::Selfish;
  const auto recs = run_matchup(m, mock, quiet(4));
  CHECK(recs.size() == 500);

  std::map<std::string, int> appearances;
  for (const auto& r : recs) {
    CHECK(r.personas == std::array{PersonaKind::Cooperative, PersonaKind::Selfish});
    CHECK(r.agreement.has_value());
    ++appearances[r.agents[0]];
    ++appearances[r.agents[1]];
  }
  CHECK(appearances.size() == 20);
  for (const auto& [name, n] : appearances) CHECK(n == 50);

  // Within a repeat every agent meets every opposing agent exactly once.
  for (int rep = 1; rep <= 5; ++rep) {
    std::set<std::pair<std::string, std::string>> met;
    for (const auto& r : recs) {
      if (r.repeat == rep) met.insert({r.agents[0], r.agents[1]});
    }
    CHECK(met.size() == 100);
  }
  CHECK(std::is_sorted(recs.begin(), recs.end(), [](const SimRecord& x, const SimRecord& y) {
    return std::tie(x.repeat, x.round, x.pair) < std::tie(y.repeat, y.round, y.pair);
  }));

  const auto table = aggregate(recs);
  REQUIRE(table.rows.size() == 2);
  const auto* coop = table.find("mock", PersonaKind::Cooperative, PersonaKind::Selfish);
  const auto* self = table.find("mock", PersonaKind::Selfish, PersonaKind::Cooperative);
  REQUIRE(coop);
  REQUIRE(self);
  CHECK(coop->cooperation == Fraction{500, 500});
  CHECK(self->cooperation == Fraction{0, 500});
  CHECK(*coop->breach == Fraction{0, 500});
  CHECK(*self->breach == Fraction{500, 500});
  CHECK_FALSE(table.find("mock", PersonaKind::Fair, PersonaKind::Selfish));
}

TEST_CASE("property: record count equals repeats x rounds x group size") {
  game::Rng rng(99);
  agent::MockBackend mock(3);
  for (int trial = 0; trial < 12; ++trial) {
    const int g = 1 + static_cast<int>(game::uniform_below(rng, 6));
    const int rounds = 1 + static_cast<int>(game::uniform_below(rng, g));
    const int repeats = 1 + static_cast<int>(game::uniform_below(rng, 3));
    const auto pa = agent::kAllPersonas[game::uniform_below(rng, 3)];
    const auto pb = agent::kAllPersonas[game::uniform_below(rng, 3)];
    const auto m = small(pa, pb, g, rounds, repeats, trial);
    const auto recs = run_matchup(m, mock, quiet(trial % 2 ? 3 : 1));
    CHECK(static_cast<int>(recs.size()) == m.samples_per_group());
    for (const auto& r : recs) {
      CHECK(r.agents[0].find("-a") != std::string::npos);
      CHECK(r.agents[1].find("-b") != std::string::npos);
      CHECK(r.payoffs == std::array{game::score_round(r.choices[0], r.choices[1]).first,
                                    game::score_round(r.choices[0], r.choices[1]).second});
    }
  }
}

TEST_CASE("agents keep history within a repeat and start empty in the next") {
  agent::MockBackend mock(2);
  RecordingBackend rec(mock);
  const auto m = small(PersonaKind::Fair, PersonaKind::Cooperative, 3, 3, 2);
  run_matchup(m, rec, quiet());
  int checked = 0;
  for (const auto& [caller, prompt] : rec.calls) {
    if (prompt.find("I DECIDE TO CHOOSE") == std::string::npos) continue;
    const auto ctx = agent::MockBackend::context_from_prompt(prompt);
    std::size_t lines = 0;
    for (auto pos = prompt.find("In round "); pos != std::string::npos; pos = prompt.find("In round ", pos + 1)) ++lines;
    CHECK(lines == static_cast<std::size_t>(ctx.round_index - 1));
    ++checked;
  }
  CHECK(checked == 2 * 3 * 3 * 2);
  std::set<std::string> callers;
  for (const auto& c : rec.calls) callers.insert(c.first);
  CHECK(callers.size() == 12);  // 6 agents x 2 repeats
}

TEST_CASE("missing decisions fall back to a seeded random choice") {
  agent::MockBackend mock(4);
  MuteDecisionBackend mute(mock);
  auto o = quiet();
  o.max_retries = 0;
  const auto m = small(PersonaKind::Cooperative, PersonaKind::Cooperative, 4, 4, 1);
  const auto a = run_matchup(m, mute, o);
  const auto b = run_matchup(m, mute, o);
  CHECK(a == b);
  int as = 0;
  for (const auto& r : a) {
    CHECK(r.decision_fallback == std::array{true, true});
    as += (r.choices[0] == Choice::A) + (r.choices[1] == Choice::A);
  }
  CHECK(as > 0);
  CHECK(as < 32);
}

TEST_CASE("record files are byte-identical across runs and worker counts") {
  agent::MockBackend mock(21);
  const auto m = small(PersonaKind::Fair, PersonaKind::Selfish, 6, 5, 2, 8);
  auto o1 = quiet(1);
  o1.out_dir = fresh_dir("det1");
  auto o2 = quiet(4);
  o2.out_dir = fresh_dir("det2");
  const auto r1 = run_matchup(m, mock, o1);
  const auto r2 = run_matchup(m, mock, o2);
  CHECK(r1 == r2);
  const auto f1 = slurp(records_path(*o1.out_dir, m));
  CHECK(!f1.empty());
  CHECK(f1 == slurp(records_path(*o2.out_dir, m)));
  CHECK(read_records(records_path(*o1.out_dir, m)) == r1);
  CHECK(read_cursor(cursor_path(*o1.out_dir, m)).done);

  // A different seed changes the outcome.
  auto m2 = m;
  m2.seed = 9;
  CHECK(run_matchup(m2, mock, quiet()) != r1);
}

TEST_CASE("backend exhaustion leaves whole rounds on disk and resume completes the run") {
  agent::MockBackend mock(6);
  const auto m = small(PersonaKind::Fair, PersonaKind::Selfish, 4, 4, 2, 3);
  auto ref_opts = quiet();
  ref_opts.out_dir = fresh_dir("ref");
  run_matchup(m, mock, ref_opts);
  const auto reference = slurp(records_path(*ref_opts.out_dir, m));

  auto o = quiet();
  o.out_dir = fresh_dir("resume");
  o.max_retries = 1;
  // 24 completions per round; fail inside round 2 of repeat 2.
  ExhaustingBackend flaky(mock, 24 * 5 + 10);
  CHECK(throws_code([&] { run_matchup(m, flaky, o); }, Errc::BackendUnavailable));
  const auto partial = read_records(records_path(*o.out_dir, m));
  CHECK(partial.size() == 5 * 4);
  CHECK(read_cursor(cursor_path(*o.out_dir, m)) == ResumeCursor{2, 2, false});

  o.resume = true;
  const auto full = run_matchup(m, mock, o);
  CHECK(full.size() == 32);
  CHECK(slurp(records_path(*o.out_dir, m)) == reference);
  CHECK(read_cursor(cursor_path(*o.out_dir, m)).done);
  // Resuming a finished run reads it back without touching the backend.
  ExhaustingBackend dead(mock, 0);
  CHECK(run_matchup(m, dead, o) == full);
}

TEST_CASE("aggregate keeps exact fractions and omits empty buckets") {
  std::vector<SimRecord> recs;
  for (int i = 0; i < 3; ++i) recs.push_back(plain(PersonaKind::Fair, PersonaKind::Fair, Choice::A, Choice::A));
  auto t = aggregate(recs);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].cooperation == Fraction{6, 6});
  CHECK(t.rows[0].cooperation.value() == 1.0);
  CHECK_FALSE(t.rows[0].agreement);
  CHECK_FALSE(t.rows[0].breach);

  recs.push_back(plain(PersonaKind::Fair, PersonaKind::Selfish, Choice::A, Choice::B));
  recs.back().messages = {"选A", "选A", "", ""};
  annotate(recs.back());
  recs.push_back(plain(PersonaKind::Fair, PersonaKind::Selfish, Choice::B, Choice::B));
  recs.back().messages = {"选A", "no", "", ""};
  annotate(recs.back());
  t = aggregate(recs);
  REQUIRE(t.rows.size() == 3);
  const auto* fs = t.find("mock", PersonaKind::Fair, PersonaKind::Selfish);
  const auto* sf = t.find("mock", PersonaKind::Selfish, PersonaKind::Fair);
  REQUIRE(fs);
  REQUIRE(sf);
  CHECK(fs->cooperation == Fraction{1, 2});
  CHECK(*fs->agreement == Fraction{1, 2});
  CHECK(*fs->breach == Fraction{0, 1});
  CHECK(*sf->breach == Fraction{1, 1});
  CHECK(aggregate({}).rows.empty());

  const auto csv = t.to_csv();
  CHECK(csv.rfind("backend,persona,opponent,cooperation_num", 0) == 0);
  CHECK(csv.find("mock,fair,fair,6,6,1.000000,,,,,,") != std::string::npos);
  CHECK(csv.find("mock,fair,selfish,1,2,0.500000,1,2,0.500000,0,1,0.000000") != std::string::npos);
}

TEST_CASE("record JSON round trip and schema errors") {
  auto r = plain(PersonaKind::Cooperative, PersonaKind::Selfish, Choice::A, Choice::B);
  r.messages = {"一", "two", "", "\"q\""};
  r.payoffs = {10, 80};
  CHECK(record_from_json(nlohmann::json::parse(to_line(r))) == r);
  annotate(r);
  CHECK(record_from_json(to_json(r)) == r);
  auto j = to_json(r);
  j["choices"][0] = "C";
  CHECK(throws_code([&] { record_from_json(j); }, Errc::SchemaError));
  j.erase("pair");
  CHECK(throws_code([&] { record_from_json(j); }, Errc::SchemaError));
}

TEST_CASE("roster runs six matchups per backend with no cross-backend pairs") {
  agent::MockBackend one(1, {}, "mock-1");
  agent::MockBackend two(2, {}, "mock-2");
  auto base = small(PersonaKind::Fair, PersonaKind::Fair, 4, 4, 2);
  CHECK(run_roster({}, base, quiet()).empty());

  const auto single = run_roster({{"mock-1", &one}}, base, quiet(2));
  REQUIRE(single.size() == 1);
  CHECK(single[0].matchups.size() == 6);

  const auto res = run_roster({{"mock-1", &one}, {"mock-2", &two}}, base, quiet(2));
  REQUIRE(res.size() == 2);
  std::set<std::string> ids;
  for (const auto& b : res) {
    CHECK(b.matchups.size() == 6);
    for (const auto& mr : b.matchups) {
      ids.insert(mr.matchup.id());
      CHECK(mr.records.size() == 32);
      for (const auto& r : mr.records) CHECK(r.backend == b.backend);
    }
    for (const auto& row : b.summary.rows) CHECK(row.backend == b.backend);
  }
  CHECK(ids.size() == 6);
  CHECK(ids.count("cooperative:cooperative") == 1);
}

TEST_CASE("default mock policies order personas in every matchup") {
  agent::MockBackend mock(1);
  Matchup base;
  base.seed = 17;
  const auto res = run_roster({{"mock", &mock}}, base, quiet(4));
  REQUIRE(res.size() == 1);
  CHECK(res[0].summary.rows.size() == 9);
  const auto violation = check_persona_orderings(res[0].summary);
  CHECK_MESSAGE(!violation, violation.value_or(""));
  for (const auto& mr : res[0].matchups) {
    CHECK(mr.records.size() == 500);
    const auto v = check_persona_orderings(aggregate(mr.records));
    CHECK_MESSAGE(!v, v.value_or(""));
  }

  // The checker does flag a reversed table.
  auto broken = res[0].summary;
  for (auto& row : broken.rows) {
    if (row.persona == PersonaKind::Selfish) row.cooperation = {1, 1};
  }
  CHECK(check_persona_orderings(broken).has_value());
}
