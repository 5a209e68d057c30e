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

#include <optional>
#include <string_view>

namespace pdlab::game {

// A = cooperate, B = defect. Only the neutral labels are ever shown.
enum class Choice { A, B };

constexpr char to_char(Choice c) { return c == Choice::A ? 'A' : 'B'; }
constexpr std::string_view to_string(Choice c) { return c == Choice::A ? "A" : "B"; }

constexpr Choice other(Choice c) { return c == Choice::A ? Choice::B : Choice::A; }

// Accepts "A"/"B" (case-insensitive); anything else is nullopt.
std::optional<Choice> parse_choice(std::string_view text);

}  // namespace pdlab::game
