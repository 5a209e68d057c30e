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

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"

using nlohmann::json;

namespace {

int report(const httplib::Result& res, int expected) {
  if (!res) {
    std::cerr << "pdlab-admin: request failed: " << httplib::to_string(res.error()) << "\n";
    return 2;
  }
  const auto body = json::parse(res->body, nullptr, false);
  std::cout << (body.is_discarded() ? res->body : body.dump(2)) << "\n";
  return res->status == expected ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Admin client for a running pdlab-server"};
  app.require_subcommand(1);
  std::string url = "http://127.0.0.1:7401";
  app.add_option("--url", url, "Admin API base URL");

  auto* create = app.add_subcommand("create-session", "Create a session and print its join tokens");
  std::string config_path;
  int participants = 0;
  std::vector<std::string> roster;
  create->add_option("--config", config_path, "Session config JSON file")->required()->check(CLI::ExistingFile);
  auto* n_opt = create->add_option("--participants", participants, "Number of participants (ids p01, p02, ...)");
  auto* r_opt = create->add_option("--roster", roster, "Explicit participant ids")->delimiter(',');
  n_opt->excludes(r_opt);

  auto* start = app.add_subcommand("start", "Start a created session");
  std::string session_id;
  start->add_option("session", session_id)->required();

  auto* status = app.add_subcommand("status", "Show one session, or list all");
  status->add_option("session", session_id);

  auto* exp = app.add_subcommand("export", "Export completed sessions as CSV tables");
  std::vector<std::string> ids;
  std::string out_dir;
  exp->add_option("--out", out_dir, "Output directory on the server host")->required();
  exp->add_option("sessions", ids)->required();

  CLI11_PARSE(app, argc, argv);

  httplib::Client client(url);
  client.set_read_timeout(30, 0);
  if (*create) {
    std::ifstream in(config_path);
    json cfg = json::parse(in, nullptr, false);
    if (cfg.is_discarded()) {
      std::cerr << "pdlab-admin: " << config_path << " is not valid JSON\n";
      return 2;
    }
    json body = {{"config", cfg}};
    if (!roster.empty()) {
      body["roster"] = roster;
    } else {
      body["participants"] = participants;
    }
    return report(client.Post("/sessions", body.dump(), "application/json"), 201);
  }
  if (*start) return report(client.Post("/sessions/" + session_id + "/start"), 200);
  if (*status) return report(client.Get(session_id.empty() ? "/sessions" : "/sessions/" + session_id), 200);
  return report(client.Post("/export", json{{"session_ids", ids}, {"out_dir", out_dir}}.dump(), "application/json"),
                200);
}
