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

#include "pdlab/session/manager.hpp"

#include <cstdio>

#include "pdlab/error.hpp"

namespace pdlab::session {

std::vector<std::string> numbered_roster(int n) {
  if (n <= 0) throw Error(Errc::ConfigInvalid, "roster size must be positive");
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "p%02d", i);
    out.emplace_back(buf);
  }
  return out;
}

SessionManager::SessionManager(AgentExecutor& executor, std::optional<std::filesystem::path> log_dir, Clock clock,
                               std::uint64_t token_seed)
    : executor_(executor), log_dir_(std::move(log_dir)), clock_(std::move(clock)), token_rng_(token_seed) {}

CreatedSession SessionManager::create(const SessionConfig& config, std::vector<std::string> roster) {
  std::lock_guard lk(mu_);
  char buf[16];
  std::snprintf(buf, sizeof buf, "s%04d", next_id_);
  const std::string id = buf;

  SessionOptions options;
  if (log_dir_) options.log_path = *log_dir_ / (id + ".jsonl");
  auto session = std::make_shared<Session>(id, config, std::move(roster), nullptr, executor_, clock_(), options);
  ++next_id_;
  if (wakeup_) session->set_wakeup(wakeup_);

  CreatedSession created{id, {}};
  for (const auto& p : session->roster()) {
    std::string token;
    do {
      char hex[33];
      std::snprintf(hex, sizeof hex, "%016llx%016llx", static_cast<unsigned long long>(token_rng_()),
                    static_cast<unsigned long long>(token_rng_()));
      token = hex;
    } while (tokens_.count(token));
    tokens_[token] = {id, p};
    created.tokens[p] = token;
  }
  sessions_[id] = std::move(session);
  return created;
}

std::shared_ptr<Session> SessionManager::find(const std::string& session_id) const {
  std::lock_guard lk(mu_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(Errc::UnknownSession, "no session '" + session_id + "'");
  return it->second;
}

void SessionManager::start(const std::string& session_id) {
  auto s = find(session_id);
  s->start(clock_());
  std::function<void()> wake;
  {
    std::lock_guard lk(mu_);
    wake = wakeup_;
  }
  if (wake) wake();
}

nlohmann::json SessionManager::status(const std::string& session_id) const { return find(session_id)->status(); }

nlohmann::json SessionManager::list() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : sessions()) {
    out.push_back({{"session_id", s->id()}, {"phase", to_string(s->phase())}});
  }
  return out;
}

DatasetFiles SessionManager::export_sessions(const std::vector<std::string>& ids,
                                             const std::filesystem::path& dir) const {
  std::vector<SessionResult> results;
  for (const auto& id : ids) results.push_back(find(id)->result());
  return export_dataset(results, dir);
}

std::optional<TokenBinding> SessionManager::resolve(const std::string& token) const {
  std::lock_guard lk(mu_);
  const auto it = tokens_.find(token);
  if (it == tokens_.end()) return std::nullopt;
  return TokenBinding{sessions_.at(it->second.first), it->second.second};
}

std::vector<std::shared_ptr<Session>> SessionManager::sessions() const {
  std::lock_guard lk(mu_);
  std::vector<std::shared_ptr<Session>> out;
  for (const auto& [_, s] : sessions_) out.push_back(s);
  return out;
}

void SessionManager::set_wakeup(std::function<void()> wakeup) {
  std::lock_guard lk(mu_);
  wakeup_ = wakeup;
  for (auto& [_, s] : sessions_) s->set_wakeup(wakeup);
}

}  // namespace pdlab::session
