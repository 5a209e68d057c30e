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

#include <thread>

#include "httplib.h"
#include "pdlab/error.hpp"
#include "pdlab/server/channel_server.hpp"

namespace pdlab::server {

using nlohmann::json;

namespace {

int http_status(Errc code) {
  switch (code) {
    case Errc::UnknownSession: return 404;
    case Errc::SessionIncomplete:
    case Errc::IllegalEvent: return 409;
    case Errc::IoError: return 500;
    default: return 400;
  }
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <class F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    reply(res, http_status(e.code()), {{"error", to_string(e.code())}, {"message", e.what()}});
  } catch (const json::exception& e) {
    reply(res, 400, {{"error", "BadRequest"}, {"message", e.what()}});
  }
}

}  // namespace

struct AdminApi::Impl {
  httplib::Server http;
  std::thread thread;
  int port = 0;
};

AdminApi::AdminApi(session::SessionManager& manager, const std::string& host, int port)
    : impl_(std::make_unique<Impl>()) {
  auto& http = impl_->http;
  http.Post("/sessions", [&manager](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = json::parse(req.body);
      const auto config = session::parse_config(body.value("config", json::object()));
      std::vector<std::string> roster;
      if (body.contains("roster")) {
        roster = body["roster"].get<std::vector<std::string>>();
      } else {
        roster = session::numbered_roster(body.value("participants", 0));
      }
      const auto created = manager.create(config, roster);
      reply(res, 201, {{"session_id", created.session_id}, {"tokens", created.tokens}});
    });
  });
  http.Post(R"(/sessions/([^/]+)/start)", [&manager](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      manager.start(req.matches[1]);
      reply(res, 200, manager.status(req.matches[1]));
    });
  });
  http.Get("/sessions", [&manager](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, manager.list()); });
  });
  http.Get(R"(/sessions/([^/]+))", [&manager](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, manager.status(req.matches[1])); });
  });
  http.Post("/export", [&manager](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = json::parse(req.body);
      const auto files = manager.export_sessions(body.at("session_ids").get<std::vector<std::string>>(),
                                                 body.at("out_dir").get<std::string>());
      reply(res, 200,
            {{"files", {files.interactions.string(), files.questionnaire.string(), files.payouts.string()}}});
    });
  });

  impl_->port = port == 0 ? http.bind_to_any_port(host) : (http.bind_to_port(host, port) ? port : -1);
  if (impl_->port < 0) throw Error(Errc::IoError, "cannot bind admin API to " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
  http.wait_until_ready();
}

AdminApi::~AdminApi() { stop(); }

int AdminApi::port() const { return impl_->port; }

void AdminApi::stop() {
  impl_->http.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace pdlab::server
