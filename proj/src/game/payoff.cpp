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

#include "pdlab/game/payoff.hpp"

#include <string>

#include "pdlab/error.hpp"

namespace pdlab::game {

PayoffMatrix::PayoffMatrix(Points mutual_coop, Points mutual_defect, Points sucker, Points temptation)
    : mutual_coop_(mutual_coop), mutual_defect_(mutual_defect), sucker_(sucker), temptation_(temptation) {
  if (!(temptation > mutual_coop && mutual_coop > mutual_defect && mutual_defect > sucker)) {
    throw Error(Errc::InvalidPayoff,
                "payoffs must satisfy temptation > mutual_coop > mutual_defect > sucker, got (" +
                    std::to_string(mutual_coop) + ", " + std::to_string(mutual_defect) + ", " +
                    std::to_string(sucker) + ", " + std::to_string(temptation) + ")");
  }
}

Points PayoffMatrix::payoff(Choice own, Choice other) const {
  if (own == Choice::A) return other == Choice::A ? mutual_coop_ : sucker_;
  return other == Choice::A ? temptation_ : mutual_defect_;
}

std::pair<Points, Points> score_round(Choice c1, Choice c2, const PayoffMatrix& m) {
  return {m.payoff(c1, c2), m.payoff(c2, c1)};
}

}  // namespace pdlab::game
