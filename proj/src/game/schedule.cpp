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

#include "pdlab/game/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

#include "pdlab/error.hpp"
#include "pdlab/game/rng.hpp"

namespace pdlab::game {

PairSchedule build_schedule(int n, int rounds, std::uint64_t seed) {
  if (n <= 0 || n % 2 != 0) {
    throw Error(Errc::OddParticipantCount, "participant count must be positive and even, got " + std::to_string(n));
  }
  if (rounds < 1 || rounds > n - 1) {
    throw Error(Errc::TooManyRounds, std::to_string(rounds) + " rounds requested but each of " + std::to_string(n) +
                                         " participants has only " + std::to_string(n - 1) + " distinct partners");
  }

  Rng rng(seed);
  std::vector<int> label(n);
  std::iota(label.begin(), label.end(), 0);
  shuffle(label, rng);
  std::vector<int> order(n - 1);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);

  // Circle method: vertex n-1 is fixed at the hub, vertices 0..n-2 rotate.
  const int m = n - 1;
  PairSchedule out{rounds, {}, seed};
  out.pairings.reserve(rounds);
  for (int r = 0; r < rounds; ++r) {
    const int base = order[r];
    std::vector<Pairing> round;
    round.reserve(n / 2);
    round.push_back({label[m], label[base]});
    for (int k = 1; k < n / 2; ++k) {
      round.push_back({label[(base + k) % m], label[(base - k + m) % m]});
    }
    out.pairings.push_back(std::move(round));
  }
  return out;
}

PairSchedule build_bipartite_schedule(std::span<const int> group_a, std::span<const int> group_b, int rounds,
                                      std::uint64_t seed) {
  if (group_a.size() != group_b.size()) {
    throw Error(Errc::SizeMismatch, "groups have " + std::to_string(group_a.size()) + " and " +
                                        std::to_string(group_b.size()) + " members");
  }
  const int g = static_cast<int>(group_a.size());
  if (g == 0) throw Error(Errc::SizeMismatch, "groups are empty");
  if (rounds < 1 || rounds > g) {
    throw Error(Errc::TooManyRounds,
                std::to_string(rounds) + " rounds requested between groups of " + std::to_string(g));
  }

  Rng rng(seed);
  std::vector<int> a(group_a.begin(), group_a.end());
  std::vector<int> b(group_b.begin(), group_b.end());
  shuffle(a, rng);
  shuffle(b, rng);
  const int offset = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(g)));

  PairSchedule out{rounds, {}, seed};
  out.pairings.reserve(rounds);
  for (int r = 0; r < rounds; ++r) {
    std::vector<Pairing> round;
    round.reserve(g);
    for (int i = 0; i < g; ++i) round.push_back({a[i], b[(i + offset + r) % g]});
    out.pairings.push_back(std::move(round));
  }
  return out;
}

std::optional<std::string> check_schedule(const PairSchedule& schedule, std::span<const int> participants) {
  if (static_cast<int>(schedule.pairings.size()) != schedule.rounds) {
    return "schedule lists " + std::to_string(schedule.pairings.size()) + " rounds, expected " +
           std::to_string(schedule.rounds);
  }
  const std::set<int> everyone(participants.begin(), participants.end());
  std::set<std::pair<int, int>> seen;
  for (int r = 0; r < schedule.rounds; ++r) {
    std::set<int> covered;
    for (const auto& p : schedule.pairings[r]) {
      if (p.first == p.second) return "round " + std::to_string(r + 1) + " pairs a participant with itself";
      for (int id : {p.first, p.second}) {
        if (!everyone.count(id)) return "round " + std::to_string(r + 1) + " uses unknown id " + std::to_string(id);
        if (!covered.insert(id).second) {
          return "participant " + std::to_string(id) + " appears twice in round " + std::to_string(r + 1);
        }
      }
      const auto key = std::minmax(p.first, p.second);
      if (!seen.insert(key).second) {
        return "pair (" + std::to_string(key.first) + "," + std::to_string(key.second) + ") repeats in round " +
               std::to_string(r + 1);
      }
    }
    if (covered != everyone) return "round " + std::to_string(r + 1) + " is not a perfect matching";
  }
  return std::nullopt;
}

}  // namespace pdlab::game
