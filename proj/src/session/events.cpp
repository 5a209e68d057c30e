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

#include "pdlab/session/events.hpp"

#include <array>

#include "pdlab/error.hpp"

namespace pdlab::session {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 15> kNames = {{
    {EventKind::SessionCreated, "session_created"},
    {EventKind::ParticipantJoined, "participant_joined"},
    {EventKind::ParticipantDisconnected, "participant_disconnected"},
    {EventKind::QuizAttempt, "quiz_attempt"},
    {EventKind::StageEnter, "stage_enter"},
    {EventKind::MessageSent, "message_sent"},
    {EventKind::MessageDelivered, "message_delivered"},
    {EventKind::ChoiceSubmitted, "choice_submitted"},
    {EventKind::TimeoutFallback, "timeout_fallback"},
    {EventKind::RoundResult, "round_result"},
    {EventKind::LlmRequest, "llm_request"},
    {EventKind::LlmResponse, "llm_response"},
    {EventKind::QuestionnaireSubmitted, "questionnaire_submitted"},
    {EventKind::PayoutComputed, "payout_computed"},
    {EventKind::SessionComplete, "session_complete"},
}};

}  // namespace

std::string_view to_string(EventKind k) {
  for (const auto& [kind, name] : kNames) {
    if (kind == k) return name;
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (const auto& [kind, name] : kNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

std::string to_line(const EventRecord& r) {
  const nlohmann::json j = {
      {"seq", r.seq}, {"at", r.at}, {"session_id", r.session_id}, {"kind", to_string(r.kind)}, {"payload", r.payload}};
  return j.dump();
}

EventRecord parse_line(std::string_view line) {
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::SchemaError, "event line is not a JSON object");
  EventRecord r;
  try {
    r.seq = j.at("seq").get<std::uint64_t>();
    r.at = j.at("at").get<game::EpochMs>();
    r.session_id = j.at("session_id").get<std::string>();
    const auto kind = parse_event_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(Errc::SchemaError, "unknown event kind");
    r.kind = *kind;
    r.payload = j.at("payload");
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SchemaError, std::string("malformed event: ") + e.what());
  }
  return r;
}

std::vector<EventRecord> read_event_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  std::vector<EventRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_line(line));
  }
  return out;
}

EventLog::EventLog(std::string session_id, std::optional<std::filesystem::path> path)
    : session_id_(std::move(session_id)) {
  if (path) {
    if (path->has_parent_path()) std::filesystem::create_directories(path->parent_path());
    file_.open(*path, std::ios::out | std::ios::trunc | std::ios::binary);
    if (!file_) throw Error(Errc::IoError, "cannot open event log " + path->string());
  }
}

const EventRecord& EventLog::append(game::EpochMs at, EventKind kind, nlohmann::json payload) {
  EventRecord r{records_.size() + 1, at, session_id_, kind, std::move(payload)};
  if (file_.is_open()) {
    file_ << to_line(r) << '\n';
    file_.flush();
  }
  records_.push_back(std::move(r));
  return records_.back();
}

}  // namespace pdlab::session
