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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pdlab/game/round_state.hpp"

namespace pdlab::session {

enum class EventKind {
  SessionCreated,
  ParticipantJoined,
  ParticipantDisconnected,
  QuizAttempt,
  StageEnter,
  MessageSent,
  MessageDelivered,
  ChoiceSubmitted,
  TimeoutFallback,
  RoundResult,
  LlmRequest,
  LlmResponse,
  QuestionnaireSubmitted,
  PayoutComputed,
  SessionComplete,
};

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

struct EventRecord {
  std::uint64_t seq = 0;
  game::EpochMs at = 0;
  std::string session_id;
  EventKind kind = EventKind::StageEnter;
  nlohmann::json payload;
  bool operator==(const EventRecord&) const = default;
};

// One JSON object per line with sorted keys, so equal records serialize to
// equal bytes.
std::string to_line(const EventRecord& r);
// Throws Error{SchemaError}.
EventRecord parse_line(std::string_view line);
std::vector<EventRecord> read_event_log(const std::filesystem::path& path);

// Append-only per-session log. Sequence numbers start at 1 and increase by
// one. With a path, every record is written and flushed as it is appended.
class EventLog {
 public:
  explicit EventLog(std::string session_id, std::optional<std::filesystem::path> path = std::nullopt);

  const EventRecord& append(game::EpochMs at, EventKind kind, nlohmann::json payload);
  const std::vector<EventRecord>& records() const { return records_; }
  const std::string& session_id() const { return session_id_; }

 private:
  std::string session_id_;
  std::vector<EventRecord> records_;
  std::ofstream file_;
};

}  // namespace pdlab::session
