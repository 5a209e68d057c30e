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
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "pdlab/game/payoff.hpp"
#include "pdlab/game/round_state.hpp"
#include "pdlab/game/schedule.hpp"
#include "test_util.hpp"

using namespace pdlab;
using namespace pdlab::game;
using pdlab::testing::throws_code;

TEST_CASE("score_round reproduces the four payoff cells") {
  CHECK(score_round(Choice::A, Choice::A) == std::pair{70, 70});
  CHECK(score_round(Choice::B, Choice::B) == std::pair{40, 40});
  CHECK(score_round(Choice::A, Choice::B) == std::pair{10, 80});
  CHECK(score_round(Choice::B, Choice::A) == std::pair{80, 10});
}

TEST_CASE("score_round is exchange-symmetric for any valid matrix") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    // Draw a strictly increasing quadruple S < P < R < T.
    int s = static_cast<int>(uniform_below(rng, 50));
    int p = s + 1 + static_cast<int>(uniform_below(rng, 50));
    int r = p + 1 + static_cast<int>(uniform_below(rng, 50));
    int t = r + 1 + static_cast<int>(uniform_below(rng, 50));
    PayoffMatrix m(r, p, s, t);
    for (Choice x : {Choice::A, Choice::B}) {
      for (Choice y : {Choice::A, Choice::B}) {
        auto xy = score_round(x, y, m);
        auto yx = score_round(y, x, m);
        CHECK(xy.first == yx.second);
        CHECK(xy.second == yx.first);
      }
    }
  }
}

TEST_CASE("payoff matrix rejects orderings that are not a prisoner's dilemma") {
  CHECK(throws_code([] { PayoffMatrix(70, 40, 10, 70); }, Errc::InvalidPayoff));
  CHECK(throws_code([] { PayoffMatrix(40, 70, 10, 80); }, Errc::InvalidPayoff));
  CHECK(throws_code([] { PayoffMatrix(70, 10, 40, 80); }, Errc::InvalidPayoff));
  CHECK_NOTHROW(PayoffMatrix(3, 1, 0, 5));
}

namespace {

RoundRules default_rules() { return RoundRules{}; }

}  // namespace

TEST_CASE("round stages advance strictly in order with communication") {
  auto rules = default_rules();
  Rng rng(1);
  auto s = begin_round(1, rules, 1000);
  CHECK(s.stage == Stage::Msg1Compose);
  CHECK(s.deadline == 1000 + 60'000);

  s = advance(s, event::SubmitMessage{0, "hi", 2000}, rules, rng);
  CHECK(s.stage == Stage::Msg1Compose);
  s = advance(s, event::SubmitMessage{1, "yo", 3000}, rules, rng);
  CHECK(s.stage == Stage::Msg1Read);
  CHECK(s.deadline == 3000 + 30'000);

  // Read stages hold the full clock even if someone tries to send early.
  CHECK(throws_code([&] { advance(s, event::SubmitMessage{0, "again", 3500}, rules, rng); }, Errc::IllegalEvent));
  s = advance(s, event::TimerExpired{s.deadline}, rules, rng);
  CHECK(s.stage == Stage::Msg2Compose);
  s = advance(s, event::SubmitMessage{1, "second", s.stage_entered + 10}, rules, rng);
  s = advance(s, event::SubmitMessage{0, "second too", s.stage_entered + 20}, rules, rng);
  CHECK(s.stage == Stage::Msg2Read);
  s = advance(s, event::TimerExpired{s.deadline + 5}, rules, rng);
  CHECK(s.stage == Stage::Decide);
  CHECK(s.messages.size() == 4);
  CHECK_FALSE(s.payoffs.has_value());

  s = advance(s, event::SubmitChoice{0, Choice::A, s.stage_entered + 1}, rules, rng);
  CHECK_FALSE(s.payoffs.has_value());
  s = advance(s, event::SubmitChoice{1, Choice::B, s.stage_entered + 2}, rules, rng);
  CHECK(s.stage == Stage::Results);
  REQUIRE(s.payoffs.has_value());
  CHECK((*s.payoffs)[0] == 10);
  CHECK((*s.payoffs)[1] == 80);

  s = advance(s, event::TimerExpired{s.deadline}, rules, rng);
  CHECK(s.stage == Stage::Done);
  CHECK(throws_code([&] { advance(s, event::TimerExpired{s.deadline + 1}, rules, rng); }, Errc::IllegalEvent));
}

TEST_CASE("compose timeout records empty messages for silent seats") {
  auto rules = default_rules();
  Rng rng(2);
  auto s = begin_round(2, rules, 0);
  s = advance(s, event::SubmitMessage{0, "only me", 100}, rules, rng);
  s = advance(s, event::TimerExpired{60'000}, rules, rng);
  CHECK(s.stage == Stage::Msg1Read);
  REQUIRE(s.message(1, 1) != nullptr);
  CHECK(s.message(1, 1)->text.empty());
  CHECK(s.message(1, 1)->timed_out);
  CHECK_FALSE(s.message(0, 1)->timed_out);
  CHECK(s.deadline == 90'000);
}

TEST_CASE("decide timeout draws the missing choice from the session rng") {
  auto rules = default_rules();
  rules.communication = false;
  auto s = begin_round(1, rules, 0);
  CHECK(s.stage == Stage::Decide);
  Rng rng(99);
  s = advance(s, event::SubmitChoice{0, Choice::A, 10}, rules, rng);

  Rng expected_rng(99);
  const Choice expected = random_choice(expected_rng);
  s = advance(s, event::TimerExpired{40'000}, rules, rng);
  CHECK(s.stage == Stage::Results);
  REQUIRE(s.choices[1].has_value());
  CHECK(s.choices[1]->fallback);
  CHECK(s.choices[1]->choice == expected);
  CHECK_FALSE(s.choices[0]->fallback);
  REQUIRE(s.payoffs.has_value());
  auto [p0, p1] = score_round(Choice::A, expected);
  CHECK((*s.payoffs)[0] == p0);
  CHECK((*s.payoffs)[1] == p1);
}

TEST_CASE("illegal and duplicate submissions are rejected") {
  auto rules = default_rules();
  Rng rng(3);
  auto s = begin_round(1, rules, 0);
  CHECK(throws_code([&] { advance(s, event::SubmitChoice{0, Choice::A, 1}, rules, rng); }, Errc::IllegalEvent));
  s = advance(s, event::SubmitMessage{0, "x", 1}, rules, rng);
  CHECK(throws_code([&] { advance(s, event::SubmitMessage{0, "y", 2}, rules, rng); }, Errc::DuplicateSubmission));
  CHECK(throws_code([&] { advance(s, event::TimerExpired{59'999}, rules, rng); }, Errc::IllegalEvent));
  CHECK(throws_code([&] { advance(s, event::SubmitMessage{2, "y", 2}, rules, rng); }, Errc::IllegalEvent));

  rules.communication = false;
  auto d = begin_round(1, rules, 0);
  d = advance(d, event::SubmitChoice{1, Choice::B, 5}, rules, rng);
  CHECK(throws_code([&] { advance(d, event::SubmitChoice{1, Choice::A, 6}, rules, rng); }, Errc::DuplicateSubmission));
}

TEST_CASE("advance is a pure function of state, event and rng position") {
  auto rules = default_rules();
  rules.communication = false;
  auto s = begin_round(4, rules, 500);
  Rng a(1234), b(1234);
  auto x = advance(s, event::TimerExpired{s.deadline}, rules, a);
  auto y = advance(s, event::TimerExpired{s.deadline}, rules, b);
  CHECK(x == y);
  CHECK(a() == b());
  // The input state is untouched.
  CHECK(s.stage == Stage::Decide);
  CHECK_FALSE(s.choices[0].has_value());
}

TEST_CASE("payoffs are set iff both choices are set") {
  auto rules = default_rules();
  Rng rng(5);
  auto s = begin_round(1, rules, 0);
  auto check = [](const RoundState& st) {
    CHECK(st.payoffs.has_value() == (st.choices[0].has_value() && st.choices[1].has_value()));
  };
  while (s.stage != Stage::Done) {
    check(s);
    s = advance(s, event::TimerExpired{s.deadline}, rules, rng);
  }
  check(s);
  CHECK(s.messages.size() == 4);
}

// --- schedules -------------------------------------------------------------

TEST_CASE("two participants have a single forced pairing") {
  auto s = build_schedule(2, 1, 42);
  REQUIRE(s.pairings.size() == 1);
  REQUIRE(s.pairings[0].size() == 1);
  auto p = s.pairings[0][0];
  CHECK(std::min(p.first, p.second) == 0);
  CHECK(std::max(p.first, p.second) == 1);
}

namespace {

using Matching = std::set<std::pair<int, int>>;

Matching normalize(const std::vector<Pairing>& round) {
  Matching m;
  for (const auto& p : round) m.insert(std::minmax(p.first, p.second));
  return m;
}

// All perfect matchings of K_n by recursive enumeration.
void enumerate_matchings(std::vector<int> rest, Matching current, std::vector<Matching>& out) {
  if (rest.empty()) {
    out.push_back(current);
    return;
  }
  int first = rest.front();
  for (std::size_t i = 1; i < rest.size(); ++i) {
    std::vector<int> next;
    for (std::size_t j = 1; j < rest.size(); ++j) {
      if (j != i) next.push_back(rest[j]);
    }
    Matching m = current;
    m.insert(std::minmax(first, rest[i]));
    enumerate_matchings(next, m, out);
  }
}

}  // namespace

TEST_CASE("K4 over three rounds uses every pair exactly once (exhaustive oracle)") {
  std::vector<Matching> matchings;
  enumerate_matchings({0, 1, 2, 3}, {}, matchings);
  REQUIRE(matchings.size() == 3);

  // Every ordered sequence of three matchings with no repeated pair.
  std::set<std::vector<Matching>> valid;
  for (const auto& a : matchings)
    for (const auto& b : matchings)
      for (const auto& c : matchings) {
        Matching all;
        for (const auto* m : {&a, &b, &c}) all.insert(m->begin(), m->end());
        if (all.size() == 6) valid.insert({a, b, c});
      }
  CHECK(valid.size() == 6);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto s = build_schedule(4, 3, seed);
    std::vector<Matching> got;
    for (const auto& r : s.pairings) got.push_back(normalize(r));
    CHECK(valid.count(got) == 1);
  }
}

TEST_CASE("schedule builder rejects odd counts and pigeonhole violations") {
  CHECK(throws_code([] { build_schedule(4, 4, 1); }, Errc::TooManyRounds));
  CHECK(throws_code([] { build_schedule(3, 1, 1); }, Errc::OddParticipantCount));
  CHECK(throws_code([] { build_schedule(0, 1, 1); }, Errc::OddParticipantCount));
}

TEST_CASE("schedules are sound for all n <= 32, rounds <= n-1, 100 seeds") {
  int checked = 0;
  for (int n = 2; n <= 32; n += 2) {
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    for (int rounds = 1; rounds <= n - 1; ++rounds) {
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto s = build_schedule(n, rounds, seed * 7919 + static_cast<std::uint64_t>(n));
        auto problem = check_schedule(s, ids);
        if (problem) FAIL_CHECK(*problem);
        ++checked;
      }
    }
  }
  CHECK(checked == 25600);
}

TEST_CASE("schedules are deterministic in (n, rounds, seed) and vary with seed") {
  CHECK(build_schedule(12, 10, 5) == build_schedule(12, 10, 5));
  CHECK_FALSE(build_schedule(12, 10, 5).pairings == build_schedule(12, 10, 6).pairings);
}

TEST_CASE("bipartite schedules cover every cross pair once when rounds == g") {
  std::vector<int> a{0, 1}, b{2, 3};
  auto s = build_bipartite_schedule(a, b, 2, 17);
  std::set<std::pair<int, int>> cross;
  for (const auto& r : s.pairings)
    for (const auto& p : r) cross.insert({p.first, p.second});
  CHECK(cross.size() == 4);

  std::vector<int> ga(10), gb(10);
  std::iota(ga.begin(), ga.end(), 0);
  std::iota(gb.begin(), gb.end(), 10);
  std::vector<int> all(20);
  std::iota(all.begin(), all.end(), 0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = build_bipartite_schedule(ga, gb, 10, seed);
    CHECK_FALSE(check_schedule(t, all).has_value());
    std::set<std::pair<int, int>> pairs;
    for (const auto& r : t.pairings) {
      CHECK(r.size() == 10);
      for (const auto& p : r) {
        CHECK(p.first < 10);
        CHECK(p.second >= 10);
        pairs.insert({p.first, p.second});
      }
    }
    CHECK(pairs.size() == 100);
  }
}

TEST_CASE("bipartite schedule errors") {
  std::vector<int> ga(10), gb(10), gc(9);
  std::iota(ga.begin(), ga.end(), 0);
  std::iota(gb.begin(), gb.end(), 10);
  CHECK(throws_code([&] { build_bipartite_schedule(ga, gb, 11, 1); }, Errc::TooManyRounds));
  CHECK(throws_code([&] { build_bipartite_schedule(ga, gc, 3, 1); }, Errc::SizeMismatch));
}

TEST_CASE("check_schedule detects repeats and imperfect rounds") {
  std::vector<int> ids{0, 1, 2, 3};
  PairSchedule repeat{2, {{{0, 1}, {2, 3}}, {{1, 0}, {3, 2}}}, 0};
  CHECK(check_schedule(repeat, ids).has_value());
  PairSchedule partial{1, {{{0, 1}}}, 0};
  CHECK(check_schedule(partial, ids).has_value());
  PairSchedule twice{1, {{{0, 1}, {1, 2}}}, 0};
  CHECK(check_schedule(twice, ids).has_value());
}
