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

#include <utility>

#include "pdlab/game/choice.hpp"

namespace pdlab::game {

using Points = int;

// Prisoner's dilemma payoffs. Construction enforces
// temptation > mutual_coop > mutual_defect > sucker.
class PayoffMatrix {
 public:
  PayoffMatrix() = default;
  PayoffMatrix(Points mutual_coop, Points mutual_defect, Points sucker, Points temptation);

  Points mutual_coop() const { return mutual_coop_; }
  Points mutual_defect() const { return mutual_defect_; }
  Points sucker() const { return sucker_; }
  Points temptation() const { return temptation_; }

  // Points earned by a player choosing `own` against `other`.
  Points payoff(Choice own, Choice other) const;

  bool operator==(const PayoffMatrix&) const = default;

 private:
  Points mutual_coop_ = 70;
  Points mutual_defect_ = 40;
  Points sucker_ = 10;
  Points temptation_ = 80;
};

std::pair<Points, Points> score_round(Choice c1, Choice c2, const PayoffMatrix& m = {});

}  // namespace pdlab::game
