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

// Session channel wire format: one JSON object per line, UTF-8, each
// carrying "v" (schema version) and "type". Clients may attach an "id"
// idempotency key to submissions; the server echoes it in ack/error.
//
// client -> server: join, quiz_answers, message_text, choice,
//                   questionnaire_answers
// server -> client: welcome, instructions, quiz, quiz_result, stage_enter,
//                   message_delivered, round_result, questionnaire_page,
//                   payout, session_complete, ack, error

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"
#include "pdlab/game/round_state.hpp"

namespace pdlab::session {

inline constexpr int kProtocolVersion = 1;

namespace client {
struct Join {
  std::string token;
};
struct QuizAnswers {
  std::map<std::string, std::string> answers;
};
struct MessageText {
  std::string text;
};
struct Choice {
  game::Choice choice = game::Choice::A;
};
struct QuestionnaireAnswers {
  nlohmann::json response;
};
}  // namespace client

struct ClientMessage {
  std::optional<std::string> id;
  std::variant<client::Join, client::QuizAnswers, client::MessageText, client::Choice, client::QuestionnaireAnswers>
      body;
};

// Throws Error{ProtocolError} for malformed JSON, a wrong version, an
// unknown type or missing fields.
ClientMessage parse_client_message(std::string_view line);
std::string encode(const ClientMessage& m);

struct ServerMessage {
  std::string type;
  nlohmann::json body = nlohmann::json::object();
  bool operator==(const ServerMessage&) const = default;
};

std::string encode(const ServerMessage& m);
// Throws Error{ProtocolError}.
ServerMessage parse_server_message(std::string_view line);

namespace server {
ServerMessage welcome(game::EpochMs server_time, int rounds);
ServerMessage instructions(const std::string& text);
ServerMessage quiz(const nlohmann::json& items);
ServerMessage quiz_result(bool passed, int attempt);
ServerMessage stage_enter(int round, game::Stage stage, game::EpochMs deadline);
ServerMessage message_delivered(int round, int slot, const std::string& text);
ServerMessage round_result(int round, game::Choice own, game::Points own_payoff, game::Choice associate,
                           game::Points associate_payoff, long total, bool own_fallback);
ServerMessage questionnaire_page(int index, int count, const nlohmann::json& page, game::EpochMs deadline);
ServerMessage payout(const std::string& amount, const std::string& currency);
ServerMessage session_complete();
ServerMessage ack(const std::optional<std::string>& ref, bool duplicate = false);
ServerMessage error(std::string_view code, const std::string& message, const std::optional<std::string>& ref);
}  // namespace server

}  // namespace pdlab::session
