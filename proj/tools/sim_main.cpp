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
#include <map>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdlab/agent/http_backend.hpp"
#include "pdlab/error.hpp"
#include "pdlab/sim/tournament.hpp"

using namespace pdlab;
using nlohmann::json;

namespace {

struct BackendSpec {
  std::unique_ptr<agent::Backend> backend;
  std::string params = "{}";
};

// "mock" and "mock-<name>" are offline; any other id must appear in the
// backend config file: {"<id>": {"base_url", "path", "model", "api_key_env", "params"}}.
BackendSpec make_backend(const std::string& id, const std::string& config_path, std::uint64_t seed) {
  if (id == "mock" || id.rfind("mock-", 0) == 0) {
    return {std::make_unique<agent::MockBackend>(seed, agent::MockPolicyConfig{}, id), "{}"};
  }
  if (config_path.empty()) throw Error(Errc::ConfigInvalid, "backend '" + id + "' needs --backend-config");
  std::ifstream in(config_path);
  json all = json::parse(in, nullptr, false);
  if (all.is_discarded() || !all.contains(id)) {
    throw Error(Errc::ConfigInvalid, "backend '" + id + "' not found in " + config_path);
  }
  const json& j = all[id];
  agent::HttpBackendConfig c;
  c.id = id;
  c.base_url = j.value("base_url", c.base_url);
  c.path = j.value("path", c.path);
  c.model = j.value("model", c.model);
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  return {std::make_unique<agent::HttpChatBackend>(c), j.value("params", json::object()).dump()};
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(Errc::IoError, "cannot write " + p.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offline agent-vs-agent tournaments"};
  app.require_subcommand(1);

  sim::Matchup base;
  std::string matchup = base.id();
  std::vector<std::string> backends = {"mock"};
  std::string backend_config;
  std::string out_dir = "sim-out";
  bool resume = false;
  unsigned workers = 4;
  int rate_ms = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--group-size", base.group_size)->check(CLI::PositiveNumber);
    sub->add_option("--repeats", base.repeats)->check(CLI::PositiveNumber);
    sub->add_option("--rounds", base.rounds)->check(CLI::PositiveNumber);
    sub->add_option("--seed", base.seed);
    sub->add_option("--backend-config", backend_config, "JSON file describing hosted backends");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_flag("--resume", resume, "Continue from existing record files");
    sub->add_option("--workers", workers, "Concurrent pairs per round")->check(CLI::Range(1u, 256u));
    sub->add_option("--min-interval-ms", rate_ms, "Minimum spacing between backend requests");
  };
  auto* run = app.add_subcommand("run", "Play one matchup");
  run->add_option("--matchup", matchup, "persona_a:persona_b");
  run->add_option("--backend", backends.front(), "Backend id, or mock");
  common(run);

  auto* roster = app.add_subcommand("roster", "Play all six persona matchups on each backend");
  roster->add_option("--backend", backends, "Backend ids (repeatable)")->expected(1, -1);
  common(roster);

  auto* agg = app.add_subcommand("aggregate", "Summarize record files under a directory");
  std::string agg_dir;
  agg->add_option("dir", agg_dir)->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    sim::RunOptions opts;
    opts.out_dir = out_dir;
    opts.resume = resume;
    opts.workers = workers;
    opts.min_request_interval = std::chrono::milliseconds(rate_ms);

    if (*run) {
      const auto [a, b] = sim::parse_matchup(matchup);
      base.persona_a = a;
      base.persona_b = b;
      base.backend_id = backends.front();
      auto spec = make_backend(base.backend_id, backend_config, base.seed);
      opts.params_json = spec.params;
      const auto records = sim::run_matchup(base, *spec.backend, opts);
      const auto summary = sim::aggregate(records).to_csv();
      auto path = sim::records_path(out_dir, base);
      write_file(path.replace_extension(".summary.csv"), summary);
      std::cout << records.size() << " records in " << sim::records_path(out_dir, base).string() << "\n" << summary;
      return 0;
    }
    if (*roster) {
      std::vector<BackendSpec> specs;
      std::vector<sim::NamedBackend> named;
      for (const auto& id : backends) {
        specs.push_back(make_backend(id, backend_config, base.seed));
        named.push_back({id, specs.back().backend.get()});
      }
      // Each backend keeps its own params.
      for (std::size_t i = 0; i < named.size(); ++i) {
        opts.params_json = specs[i].params;
        const auto res = sim::run_roster({named[i]}, base, opts);
        const auto csv = res.front().summary.to_csv();
        write_file(std::filesystem::path(out_dir) / named[i].id / "summary.csv", csv);
        std::cout << csv;
      }
      return 0;
    }
    std::vector<sim::SimRecord> all;
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(agg_dir)) {
      if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto recs = sim::read_records(f);
      all.insert(all.end(), recs.begin(), recs.end());
    }
    const auto csv = sim::aggregate(all).to_csv();
    write_file(std::filesystem::path(agg_dir) / "summary.csv", csv);
    std::cout << csv;
  } catch (const std::exception& e) {
    std::cerr << "sim: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
