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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pdlab::game {

struct Pairing {
  int first = 0;
  int second = 0;

  bool operator==(const Pairing&) const = default;
};

// pairings[r] lists the pairs of round r + 1.
struct PairSchedule {
  int rounds = 0;
  std::vector<std::vector<Pairing>> pairings;
  std::uint64_t seed = 0;

  bool operator==(const PairSchedule&) const = default;
};

// Random relabeling of the circle-method 1-factorization of K_n, with the
// round order shuffled as well. n must be even and rounds <= n - 1.
PairSchedule build_schedule(int n, int rounds, std::uint64_t seed);

// Latin-square rotation between two equal-size groups: in round r, the i-th
// member of a (after a seeded shuffle) meets member (i + offset + r) mod g of b.
// For rounds == g every cross pair occurs exactly once.
PairSchedule build_bipartite_schedule(std::span<const int> group_a, std::span<const int> group_b,
                                      int rounds, std::uint64_t seed);

// Returns a description of the first violated invariant, or nullopt when
// every round is a perfect matching over `participants` and no unordered
// pair repeats across rounds.
std::optional<std::string> check_schedule(const PairSchedule& schedule, std::span<const int> participants);

}  // namespace pdlab::game
