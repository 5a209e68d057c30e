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

#include "pdlab/agent/parse.hpp"

#include <string>
#include <vector>

#include "pdlab/error.hpp"

namespace pdlab::agent {

namespace {

constexpr std::string_view kDecisionPhrase = "i decide to choose";

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_opener(char c) { return c == '[' || c == '(' || c == '"' || c == '\'' || c == '*' || c == '`' || c == '_'; }

bool is_closer(char c) {
  return c == ']' || c == ')' || c == '"' || c == '\'' || c == '*' || c == '`' || c == '_' || c == '.' ||
         c == ',' || c == '!' || c == ';' || c == '\n' || c == '\r';
}

// Parses the token following one occurrence of the phrase.
std::optional<game::Choice> token_after(std::string_view raw, std::size_t pos) {
  bool opened = false;
  while (pos < raw.size()) {
    const char c = raw[pos];
    if (c == ' ' || c == '\t' || c == ':') {
      ++pos;
    } else if (is_opener(c)) {
      opened = true;
      ++pos;
    } else {
      break;
    }
  }
  if (pos >= raw.size()) return std::nullopt;
  const char c = raw[pos];
  const bool at_end = pos + 1 >= raw.size();
  const char next = at_end ? '\0' : raw[pos + 1];
  if (!at_end && is_alnum(next)) return std::nullopt;
  if (c == 'A' || c == 'B') return c == 'A' ? game::Choice::A : game::Choice::B;
  if (c == 'a' || c == 'b') {
    if (opened || at_end || is_closer(next)) return c == 'a' ? game::Choice::A : game::Choice::B;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> find_bracketed_message(std::string_view raw) {
  std::optional<std::string> last;
  std::size_t open = std::string_view::npos;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '<') {
      open = i;
    } else if (raw[i] == '>' && open != std::string_view::npos) {
      last = std::string(trim(raw.substr(open + 1, i - open - 1)));
      open = std::string_view::npos;
    }
  }
  return last;
}

std::string extract_bracketed_message(std::string_view raw) {
  auto msg = find_bracketed_message(raw);
  if (!msg) throw Error(Errc::NoBracketedMessage, "completion contains no <...> message");
  return *msg;
}

std::optional<game::Choice> find_decision(std::string_view raw) {
  std::string folded(raw.size(), '\0');
  for (std::size_t i = 0; i < raw.size(); ++i) folded[i] = lower(raw[i]);

  std::vector<std::size_t> hits;
  for (auto p = folded.find(kDecisionPhrase); p != std::string::npos; p = folded.find(kDecisionPhrase, p + 1)) {
    hits.push_back(p);
  }
  for (auto it = hits.rbegin(); it != hits.rend(); ++it) {
    if (auto c = token_after(raw, *it + kDecisionPhrase.size())) return c;
  }
  return std::nullopt;
}

game::Choice extract_decision(std::string_view raw) {
  auto c = find_decision(raw);
  if (!c) throw Error(Errc::NoDecisionFound, "completion contains no 'I DECIDE TO CHOOSE A|B'");
  return *c;
}

}  // namespace pdlab::agent
