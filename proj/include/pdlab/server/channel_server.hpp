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

#include <chrono>
#include <memory>
#include <string>

#include "pdlab/session/manager.hpp"

namespace boost::asio {
class io_context;
}

namespace pdlab::server {

// TCP listener for participant session channels: newline-delimited JSON in
// both directions. The first line of a connection must be a join carrying
// the participant's token; a later join with the same token replaces the
// old connection and resynchronizes the participant's view. Session timers
// are pumped every tick on the io_context thread.
class ChannelServer {
 public:
  ChannelServer(boost::asio::io_context& io, session::SessionManager& manager, const std::string& host,
                unsigned short port, std::chrono::milliseconds tick = std::chrono::milliseconds{100});
  ~ChannelServer();
  ChannelServer(const ChannelServer&) = delete;
  ChannelServer& operator=(const ChannelServer&) = delete;

  unsigned short port() const;
  void stop();

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// JSON admin API over HTTP, served from its own thread:
//   POST /sessions            {"config": {...}, "roster": [...] | "participants": n}
//   POST /sessions/{id}/start
//   GET  /sessions            GET /sessions/{id}
//   POST /export              {"session_ids": [...], "out_dir": "..."}
class AdminApi {
 public:
  AdminApi(session::SessionManager& manager, const std::string& host, int port);
  ~AdminApi();
  AdminApi(const AdminApi&) = delete;
  AdminApi& operator=(const AdminApi&) = delete;

  int port() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pdlab::server
