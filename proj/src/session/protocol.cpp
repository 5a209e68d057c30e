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

#include "pdlab/session/protocol.hpp"

#include "pdlab/error.hpp"

namespace pdlab::session {

using nlohmann::json;

namespace {

[[noreturn]] void protocol(const std::string& what) { throw Error(Errc::ProtocolError, what); }

json parse_object(std::string_view line) {
  const auto j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) protocol("line is not a JSON object");
  if (!j.contains("v") || !j["v"].is_number_integer() || j["v"].get<int>() != kProtocolVersion) {
    protocol("unsupported schema version");
  }
  if (!j.contains("type") || !j["type"].is_string()) protocol("missing type");
  return j;
}

template <class T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    protocol(std::string("bad or missing '") + key + "'");
  }
}

}  // namespace

ClientMessage parse_client_message(std::string_view line) {
  const auto j = parse_object(line);
  ClientMessage m;
  if (j.contains("id")) m.id = field<std::string>(j, "id");
  const auto type = j["type"].get<std::string>();
  if (type == "join") {
    m.body = client::Join{field<std::string>(j, "token")};
  } else if (type == "quiz_answers") {
    m.body = client::QuizAnswers{field<std::map<std::string, std::string>>(j, "answers")};
  } else if (type == "message_text") {
    m.body = client::MessageText{field<std::string>(j, "text")};
  } else if (type == "choice") {
    const auto c = game::parse_choice(field<std::string>(j, "choice"));
    if (!c) protocol("choice must be A or B");
    m.body = client::Choice{*c};
  } else if (type == "questionnaire_answers") {
    if (!j.contains("response") || !j["response"].is_object()) protocol("bad or missing 'response'");
    m.body = client::QuestionnaireAnswers{j["response"]};
  } else {
    protocol("unknown client message type '" + type + "'");
  }
  return m;
}

std::string encode(const ClientMessage& m) {
  json j = {{"v", kProtocolVersion}};
  if (m.id) j["id"] = *m.id;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, client::Join>) {
          j["type"] = "join";
          j["token"] = b.token;
        } else if constexpr (std::is_same_v<T, client::QuizAnswers>) {
          j["type"] = "quiz_answers";
          j["answers"] = b.answers;
        } else if constexpr (std::is_same_v<T, client::MessageText>) {
          j["type"] = "message_text";
          j["text"] = b.text;
        } else if constexpr (std::is_same_v<T, client::Choice>) {
          j["type"] = "choice";
          j["choice"] = game::to_string(b.choice);
        } else {
          j["type"] = "questionnaire_answers";
          j["response"] = b.response;
        }
      },
      m.body);
  return j.dump();
}

std::string encode(const ServerMessage& m) {
  json j = m.body;
  j["v"] = kProtocolVersion;
  j["type"] = m.type;
  return j.dump();
}

ServerMessage parse_server_message(std::string_view line) {
  auto j = parse_object(line);
  ServerMessage m{j["type"].get<std::string>()};
  j.erase("v");
  j.erase("type");
  m.body = std::move(j);
  return m;
}

namespace server {

ServerMessage welcome(game::EpochMs server_time, int rounds) {
  return {"welcome", {{"server_time_ms", server_time}, {"rounds", rounds}}};
}

ServerMessage instructions(const std::string& text) { return {"instructions", {{"text", text}}}; }

ServerMessage quiz(const json& items) { return {"quiz", {{"items", items}}}; }

ServerMessage quiz_result(bool passed, int attempt) {
  return {"quiz_result", {{"passed", passed}, {"attempt", attempt}}};
}

ServerMessage stage_enter(int round, game::Stage stage, game::EpochMs deadline) {
  return {"stage_enter", {{"round", round}, {"stage", game::to_string(stage)}, {"deadline_epoch_ms", deadline}}};
}

ServerMessage message_delivered(int round, int slot, const std::string& text) {
  return {"message_delivered", {{"round", round}, {"slot", slot}, {"text", text}}};
}

ServerMessage round_result(int round, game::Choice own, game::Points own_payoff, game::Choice associate,
                           game::Points associate_payoff, long total, bool own_fallback) {
  return {"round_result",
          {{"round", round},
           {"own_choice", game::to_string(own)},
           {"own_payoff", own_payoff},
           {"associate_choice", game::to_string(associate)},
           {"associate_payoff", associate_payoff},
           {"total", total},
           {"own_fallback", own_fallback}}};
}

ServerMessage questionnaire_page(int index, int count, const json& page, game::EpochMs deadline) {
  return {"questionnaire_page", {{"index", index}, {"count", count}, {"page", page}, {"deadline_epoch_ms", deadline}}};
}

ServerMessage payout(const std::string& amount, const std::string& currency) {
  return {"payout", {{"amount", amount}, {"currency", currency}}};
}

ServerMessage session_complete() { return {"session_complete"}; }

ServerMessage ack(const std::optional<std::string>& ref, bool duplicate) {
  ServerMessage m{"ack", {{"duplicate", duplicate}}};
  if (ref) m.body["ref"] = *ref;
  return m;
}

ServerMessage error(std::string_view code, const std::string& message, const std::optional<std::string>& ref) {
  ServerMessage m{"error", {{"code", code}, {"message", message}}};
  if (ref) m.body["ref"] = *ref;
  return m;
}

}  // namespace server

}  // namespace pdlab::session
