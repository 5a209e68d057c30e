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

#include "pdlab/agent/persona.hpp"

namespace pdlab::agent {

std::string_view to_string(PersonaKind kind) {
  switch (kind) {
    case PersonaKind::Cooperative: return "cooperative";
    case PersonaKind::Fair: return "fair";
    case PersonaKind::Selfish: return "selfish";
  }
  return "unknown";
}

std::optional<PersonaKind> parse_persona(std::string_view name) {
  for (PersonaKind k : kAllPersonas) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view persona_name(PersonaKind kind) {
  switch (kind) {
    case PersonaKind::Cooperative: return "COOPERATIVE";
    case PersonaKind::Fair: return "FAIR-MINDED";
    case PersonaKind::Selfish: return "INDIVIDUALISTIC";
  }
  return "";
}

}  // namespace pdlab::agent
