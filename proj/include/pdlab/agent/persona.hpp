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
#include <optional>
#include <string_view>

namespace pdlab::agent {

enum class PersonaKind { Cooperative, Fair, Selfish };

inline constexpr std::array<PersonaKind, 3> kAllPersonas = {PersonaKind::Cooperative, PersonaKind::Fair,
                                                            PersonaKind::Selfish};

// Lower-case identifier used in configs, CLIs and record files.
std::string_view to_string(PersonaKind kind);
std::optional<PersonaKind> parse_persona(std::string_view name);

// The capitalized name substituted for {PERSONA_NAME}.
std::string_view persona_name(PersonaKind kind);

}  // namespace pdlab::agent
