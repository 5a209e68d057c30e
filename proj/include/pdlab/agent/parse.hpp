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
#include <string>
#include <string_view>

#include "pdlab/game/choice.hpp"

namespace pdlab::agent {

// Contents of the last well-formed <...> pair (no nested angle brackets),
// trimmed of surrounding whitespace.
std::optional<std::string> find_bracketed_message(std::string_view raw);

// As above; throws Error{NoBracketedMessage} when no pair exists.
std::string extract_bracketed_message(std::string_view raw);

// Last case-insensitive "I DECIDE TO CHOOSE" that is followed (after
// optional whitespace, brackets, quotes or emphasis marks) by a lone A or B.
// A lower-case a/b only counts when it is closed by a bracket or punctuation
// or ends the line, so "... to choose a strategy" is not read as A.
std::optional<game::Choice> find_decision(std::string_view raw);

// As above; throws Error{NoDecisionFound}.
game::Choice extract_decision(std::string_view raw);

}  // namespace pdlab::agent
