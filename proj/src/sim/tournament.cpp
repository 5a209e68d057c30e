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

#include "pdlab/sim/tournament.hpp"

#include <algorithm>
#include <boost/asio/post.hpp>
#include <boost/asio/thread_pool.hpp>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "pdlab/agent/agent_runner.hpp"
#include "pdlab/error.hpp"
#include "pdlab/game/rng.hpp"
#include "pdlab/game/schedule.hpp"

namespace pdlab::sim {

using nlohmann::json;

std::string Matchup::id() const {
  return std::string(agent::to_string(persona_a)) + ":" + std::string(agent::to_string(persona_b));
}

std::pair<agent::PersonaKind, agent::PersonaKind> parse_matchup(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(Errc::InvalidArgument, "matchup must look like fair:selfish");
  auto a = agent::parse_persona(text.substr(0, colon));
  auto b = agent::parse_persona(text.substr(colon + 1));
  if (!a || !b) throw Error(Errc::InvalidArgument, "unknown persona in matchup '" + text + "'");
  return {*a, *b};
}

// ---- records ----

json to_json(const SimRecord& r) {
  json j = {{"matchup", r.matchup},
            {"backend", r.backend},
            {"repeat", r.repeat},
            {"round", r.round},
            {"pair", r.pair},
            {"agents", r.agents},
            {"personas", {agent::to_string(r.personas[0]), agent::to_string(r.personas[1])}},
            {"messages", r.messages},
            {"choices", {game::to_string(r.choices[0]), game::to_string(r.choices[1])}},
            {"payoffs", r.payoffs},
            {"decision_fallback", r.decision_fallback}};
  if (r.agreement) j["agreement"] = *r.agreement;
  if (r.breach) j["breach"] = *r.breach;
  return j;
}

SimRecord record_from_json(const json& j) {
  try {
    SimRecord r;
    r.matchup = j.at("matchup").get<std::string>();
    r.backend = j.at("backend").get<std::string>();
    r.repeat = j.at("repeat").get<int>();
    r.round = j.at("round").get<int>();
    r.pair = j.at("pair").get<int>();
    r.agents = j.at("agents").get<std::array<std::string, 2>>();
    for (int s = 0; s < 2; ++s) {
      auto p = agent::parse_persona(j.at("personas").at(s).get<std::string>());
      auto c = game::parse_choice(j.at("choices").at(s).get<std::string>());
      if (!p || !c) throw Error(Errc::SchemaError, "bad persona or choice in record");
      r.personas[s] = *p;
      r.choices[s] = *c;
    }
    r.messages = j.at("messages").get<std::array<std::string, 4>>();
    r.payoffs = j.at("payoffs").get<std::array<game::Points, 2>>();
    r.decision_fallback = j.at("decision_fallback").get<std::array<bool, 2>>();
    if (j.contains("agreement")) r.agreement = j["agreement"].get<bool>();
    if (j.contains("breach")) r.breach = j["breach"].get<std::array<bool, 2>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaError, std::string("malformed sim record: ") + e.what());
  }
}

std::string to_line(const SimRecord& r) { return to_json(r).dump(); }

std::vector<SimRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::vector<SimRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(Errc::SchemaError, "invalid JSON line in " + path.string());
    out.push_back(record_from_json(j));
  }
  return out;
}

// ---- agreement detection ----

namespace {

bool ascii_alnum(unsigned char c) { return std::isalnum(c) != 0; }

// Standalone occurrences of the letter (ASCII or fullwidth).
bool names_choice(const std::string& s, char letter) {
  const char fullwidth_last = letter == 'A' ? '\xA1' : '\xA2';
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t len = 0;
    if (s[i] == letter) {
      len = 1;
    } else if (i + 2 < s.size() && s[i] == '\xEF' && s[i + 1] == '\xBC' && s[i + 2] == fullwidth_last) {
      len = 3;
    }
    if (len == 0) continue;
    const bool before_ok = i == 0 || !ascii_alnum(static_cast<unsigned char>(s[i - 1]));
    const bool after_ok = i + len >= s.size() || !ascii_alnum(static_cast<unsigned char>(s[i + len]));
    if (before_ok && after_ok) return true;
  }
  return false;
}

}  // namespace

bool proposes_mutual_a(const std::string& message) { return names_choice(message, 'A') && !names_choice(message, 'B'); }

bool detect_agreement(const SimRecord& r) {
  const bool a = proposes_mutual_a(r.messages[0]) || proposes_mutual_a(r.messages[2]);
  const bool b = proposes_mutual_a(r.messages[1]) || proposes_mutual_a(r.messages[3]);
  return a && b;
}

void annotate(SimRecord& r) {
  r.agreement = detect_agreement(r);
  r.breach = std::array<bool, 2>{*r.agreement && r.choices[0] == game::Choice::B,
                                 *r.agreement && r.choices[1] == game::Choice::B};
}

// ---- run_matchup ----

namespace {

class RateLimitedBackend : public agent::Backend {
 public:
  RateLimitedBackend(agent::Backend& inner, std::chrono::milliseconds interval) : inner_(inner), interval_(interval) {}
  std::string id() const override { return inner_.id(); }
  std::string send(const agent::CompletionRequest& request) override {
    std::chrono::steady_clock::time_point slot;
    {
      std::lock_guard lk(mu_);
      const auto now = std::chrono::steady_clock::now();
      slot = std::max(now, next_);
      next_ = slot + interval_;
    }
    std::this_thread::sleep_until(slot);
    return inner_.send(request);
  }

 private:
  agent::Backend& inner_;
  std::chrono::milliseconds interval_;
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_{};
};

std::string agent_name(agent::PersonaKind p, char group, int index) {
  std::string n = std::to_string(index + 1);
  if (n.size() < 2) n.insert(0, "0");
  return std::string(agent::to_string(p)) + "-" + group + n;
}

struct SimAgent {
  std::string name;
  std::unique_ptr<agent::AgentState> state;
  std::unique_ptr<agent::AgentRunner> runner;
};

void write_cursor(const std::filesystem::path& path, const ResumeCursor& c) {
  std::ofstream out(path, std::ios::trunc);
  out << json{{"repeat", c.repeat}, {"round", c.round}, {"done", c.done}}.dump() << "\n";
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
}

std::uint64_t pair_seed(std::uint64_t seed, int repeat, int round, std::size_t pair) {
  std::uint64_t h = game::mix_seed(seed, 0x5117);
  h = game::mix_seed(h, static_cast<std::uint64_t>(repeat));
  h = game::mix_seed(h, static_cast<std::uint64_t>(round));
  return game::mix_seed(h, pair);
}

ResumeCursor next_cursor(const Matchup& m, int repeat, int round) {
  if (round < m.rounds) return {repeat, round + 1, false};
  if (repeat < m.repeats) return {repeat + 1, 1, false};
  return {m.repeats, m.rounds, true};
}

}  // namespace

std::filesystem::path records_path(const std::filesystem::path& out_dir, const Matchup& m) {
  std::string file = m.id();
  std::replace(file.begin(), file.end(), ':', '_');
  return out_dir / m.backend_id / (file + ".jsonl");
}

std::filesystem::path cursor_path(const std::filesystem::path& out_dir, const Matchup& m) {
  auto p = records_path(out_dir, m);
  p.replace_extension(".cursor.json");
  return p;
}

ResumeCursor read_cursor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return {};
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::SchemaError, "invalid cursor file " + path.string());
  return {j.value("repeat", 1), j.value("round", 1), j.value("done", false)};
}

std::vector<SimRecord> run_matchup(const Matchup& m, agent::Backend& backend, const RunOptions& options) {
  if (m.group_size < 1 || m.repeats < 1 || m.rounds < 1) {
    throw Error(Errc::InvalidArgument, "group size, repeats and rounds must be positive");
  }
  if (m.rounds > m.group_size) {
    throw Error(Errc::TooManyRounds, std::to_string(m.rounds) + " rounds exceed the " +
                                         std::to_string(m.group_size) + " distinct opponents per agent");
  }
  const int g = m.group_size;
  std::vector<int> ids_a(g), ids_b(g);
  for (int i = 0; i < g; ++i) {
    ids_a[i] = i;
    ids_b[i] = g + i;
  }

  std::unique_ptr<RateLimitedBackend> limited;
  agent::Backend* be = &backend;
  if (options.min_request_interval.count() > 0) {
    limited = std::make_unique<RateLimitedBackend>(backend, options.min_request_interval);
    be = limited.get();
  }
  agent::AgentSettings settings;
  settings.example_dialogues = options.example_dialogues;
  settings.payoff = options.payoff;
  settings.params_json = options.params_json;
  settings.timeout = options.timeout;
  settings.max_retries = options.max_retries;
  settings.retry = options.retry;

  std::vector<SimRecord> records;
  ResumeCursor cursor;
  std::optional<std::filesystem::path> rec_path, cur_path;
  std::ofstream sink;
  if (options.out_dir) {
    rec_path = records_path(*options.out_dir, m);
    cur_path = cursor_path(*options.out_dir, m);
    std::filesystem::create_directories(rec_path->parent_path());
    if (options.resume && std::filesystem::exists(*rec_path)) {
      records = read_records(*rec_path);
      if (records.size() % static_cast<std::size_t>(g) != 0) {
        throw Error(Errc::SchemaError, rec_path->string() + " ends in a partial round");
      }
      for (const auto& r : records) {
        if (r.matchup != m.id() || r.backend != m.backend_id) {
          throw Error(Errc::SchemaError, rec_path->string() + " belongs to a different matchup");
        }
      }
      if (!records.empty()) cursor = next_cursor(m, records.back().repeat, records.back().round);
      if (cursor.done) return records;
      sink.open(*rec_path, std::ios::app);
    } else {
      sink.open(*rec_path, std::ios::trunc);
    }
    if (!sink) throw Error(Errc::IoError, "cannot write " + rec_path->string());
  }

  std::unique_ptr<boost::asio::thread_pool> pool;
  if (options.workers > 1) pool = std::make_unique<boost::asio::thread_pool>(options.workers);

  for (int repeat = cursor.repeat; repeat <= m.repeats; ++repeat) {
    const auto schedule =
        game::build_bipartite_schedule(ids_a, ids_b, m.rounds, game::mix_seed(m.seed, static_cast<std::uint64_t>(repeat)));

    // Fresh agents each repeat; the instance id carries the repeat so
    // backends see distinct callers.
    std::vector<SimAgent> agents(2 * g);
    for (int i = 0; i < 2 * g; ++i) {
      const bool in_a = i < g;
      auto& a = agents[i];
      a.name = agent_name(in_a ? m.persona_a : m.persona_b, in_a ? 'a' : 'b', in_a ? i : i - g);
      a.state = std::make_unique<agent::AgentState>(a.name + "@r" + std::to_string(repeat),
                                                    in_a ? m.persona_a : m.persona_b);
      a.runner = std::make_unique<agent::AgentRunner>(*a.state, *be, settings);
    }
    // Replay history already on disk for this repeat.
    for (const auto& r : records) {
      if (r.repeat != repeat) continue;
      const auto& pr = schedule.pairings[r.round - 1][r.pair];
      agents[std::min(pr.first, pr.second)].state->record_round(
          {r.round, r.choices[0], r.choices[1], r.payoffs[0], r.payoffs[1]});
      agents[std::max(pr.first, pr.second)].state->record_round({r.round, r.choices[1], r.choices[0], r.payoffs[1], r.payoffs[0]});
    }

    const int first_round = repeat == cursor.repeat ? cursor.round : 1;
    for (int round = first_round; round <= m.rounds; ++round) {
      const auto& pairs = schedule.pairings[round - 1];
      std::vector<SimRecord> batch(pairs.size());
      auto play = [&, repeat, round](std::size_t k) {
        const auto pr = pairs[k];
        // Group a always sits in slot 0.
        SimAgent& a = agents[std::min(pr.first, pr.second)];
        SimAgent& b = agents[std::max(pr.first, pr.second)];
        SimRecord& rec = batch[k];
        rec.matchup = m.id();
        rec.backend = m.backend_id;
        rec.repeat = repeat;
        rec.round = round;
        rec.pair = static_cast<int>(k);
        rec.agents = {a.name, b.name};
        rec.personas = {a.state->persona(), b.state->persona()};
        const auto a1 = a.runner->first_message(round).text;
        const auto b1 = b.runner->first_message(round).text;
        const auto a2 = a.runner->second_message(a1, b1).text;
        const auto b2 = b.runner->second_message(b1, a1).text;
        rec.messages = {a1, b1, a2, b2};
        const auto da = a.runner->decide({a1, b1, a2, b2}, round);
        const auto db = b.runner->decide({b1, a1, b2, a2}, round);
        game::Rng rng(pair_seed(m.seed, repeat, round, k));
        rec.decision_fallback = {!da.choice, !db.choice};
        rec.choices[0] = da.choice ? *da.choice : game::random_choice(rng);
        rec.choices[1] = db.choice ? *db.choice : game::random_choice(rng);
        const auto [pa, pb] = game::score_round(rec.choices[0], rec.choices[1], options.payoff);
        rec.payoffs = {pa, pb};
        if (options.detect_agreement) annotate(rec);
      };

      std::vector<std::exception_ptr> errors(pairs.size());
      if (pool) {
        std::vector<std::future<void>> done;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
          std::packaged_task<void()> task([&, k] { play(k); });
          done.push_back(task.get_future());
          boost::asio::post(*pool, std::move(task));
        }
        for (std::size_t k = 0; k < done.size(); ++k) {
          try {
            done[k].get();
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      } else {
        for (std::size_t k = 0; k < pairs.size(); ++k) {
          try {
            play(k);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      }
      for (auto& e : errors) {
        if (!e) continue;
        if (cur_path) write_cursor(*cur_path, {repeat, round, false});
        std::rethrow_exception(e);
      }

      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto pr = pairs[k];
        const auto& rec = batch[k];
        SimAgent& a = agents[std::min(pr.first, pr.second)];
        SimAgent& b = agents[std::max(pr.first, pr.second)];
        a.state->record_round({round, rec.choices[0], rec.choices[1], rec.payoffs[0], rec.payoffs[1]});
        b.state->record_round({round, rec.choices[1], rec.choices[0], rec.payoffs[1], rec.payoffs[0]});
        if (sink.is_open()) sink << to_line(rec) << "\n";
        records.push_back(rec);
      }
      if (sink.is_open()) {
        sink.flush();
        if (!sink) throw Error(Errc::IoError, "cannot write " + rec_path->string());
        write_cursor(*cur_path, next_cursor(m, repeat, round));
      }
    }
  }
  return records;
}

// ---- aggregation ----

namespace {

int persona_rank(agent::PersonaKind p) {
  switch (p) {
    case agent::PersonaKind::Cooperative:
      return 0;
    case agent::PersonaKind::Fair:
      return 1;
    case agent::PersonaKind::Selfish:
      return 2;
  }
  return 3;
}

std::string fraction_cells(const std::optional<Fraction>& f) {
  if (!f) return ",,";
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << f->num << "," << f->den << "," << f->value();
  return os.str();
}

}  // namespace

const SummaryRow* SummaryTable::find(const std::string& backend, agent::PersonaKind persona,
                                     agent::PersonaKind opponent) const {
  for (const auto& r : rows) {
    if (r.backend == backend && r.persona == persona && r.opponent == opponent) return &r;
  }
  return nullptr;
}

std::string SummaryTable::to_csv() const {
  std::string out =
      "backend,persona,opponent,cooperation_num,cooperation_den,cooperation_rate,"
      "agreement_num,agreement_den,agreement_rate,breach_num,breach_den,breach_rate\n";
  for (const auto& r : rows) {
    out += r.backend + "," + std::string(agent::to_string(r.persona)) + "," +
           std::string(agent::to_string(r.opponent)) + "," + fraction_cells(r.cooperation) + "," +
           fraction_cells(r.agreement) + "," + fraction_cells(r.breach) + "\n";
  }
  return out;
}

SummaryTable aggregate(const std::vector<SimRecord>& records) {
  struct Bucket {
    Fraction coop, agree, breach;
  };
  using Key = std::tuple<std::string, int, int>;
  std::map<Key, Bucket> buckets;
  for (const auto& r : records) {
    for (int s = 0; s < 2; ++s) {
      auto& b = buckets[{r.backend, persona_rank(r.personas[s]), persona_rank(r.personas[1 - s])}];
      b.coop.den += 1;
      b.coop.num += r.choices[s] == game::Choice::A;
      if (r.agreement) {
        b.agree.den += 1;
        if (*r.agreement) {
          b.agree.num += 1;
          b.breach.den += 1;
          b.breach.num += r.choices[s] == game::Choice::B;
        }
      }
    }
  }
  SummaryTable table;
  for (const auto& [key, b] : buckets) {
    SummaryRow row;
    row.backend = std::get<0>(key);
    row.persona = agent::kAllPersonas[std::get<1>(key)];
    row.opponent = agent::kAllPersonas[std::get<2>(key)];
    row.cooperation = b.coop;
    if (b.agree.den > 0) row.agreement = b.agree;
    if (b.breach.den > 0) row.breach = b.breach;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::optional<std::string> check_persona_orderings(const SummaryTable& table) {
  auto describe = [](const SummaryRow& r) {
    return r.backend + " " + std::string(agent::to_string(r.persona)) + " vs " +
           std::string(agent::to_string(r.opponent));
  };
  for (const auto& x : table.rows) {
    for (const auto& y : table.rows) {
      if (x.backend != y.backend || persona_rank(x.persona) >= persona_rank(y.persona)) continue;
      // x's persona ranks above y's.
      if (!(x.cooperation.value() > y.cooperation.value())) {
        return "cooperation of " + describe(x) + " does not exceed " + describe(y);
      }
      if (!x.breach || !y.breach) return "breach rate undefined for " + describe(x.breach ? y : x);
      const bool strict = y.persona == agent::PersonaKind::Selfish;
      const double bx = x.breach->value(), by = y.breach->value();
      if (strict ? !(by > bx) : !(by >= bx)) {
        return "breach of " + describe(y) + " is not above " + describe(x);
      }
    }
  }
  return std::nullopt;
}

// ---- roster ----

std::vector<Matchup> roster_matchups(const Matchup& base) {
  using agent::PersonaKind;
  const std::pair<PersonaKind, PersonaKind> grid[] = {
      {PersonaKind::Cooperative, PersonaKind::Fair},        {PersonaKind::Cooperative, PersonaKind::Selfish},
      {PersonaKind::Fair, PersonaKind::Selfish},            {PersonaKind::Cooperative, PersonaKind::Cooperative},
      {PersonaKind::Fair, PersonaKind::Fair},               {PersonaKind::Selfish, PersonaKind::Selfish}};
  std::vector<Matchup> out;
  for (const auto& [a, b] : grid) {
    Matchup m = base;
    m.persona_a = a;
    m.persona_b = b;
    out.push_back(m);
  }
  return out;
}

std::vector<BackendResults> run_roster(const std::vector<NamedBackend>& backends, const Matchup& base,
                                       const RunOptions& options) {
  std::vector<BackendResults> out;
  for (const auto& nb : backends) {
    if (!nb.backend) throw Error(Errc::InvalidArgument, "backend '" + nb.id + "' is null");
    BackendResults res;
    res.backend = nb.id;
    std::vector<SimRecord> all;
    for (Matchup m : roster_matchups(base)) {
      m.backend_id = nb.id;
      auto records = run_matchup(m, *nb.backend, options);
      all.insert(all.end(), records.begin(), records.end());
      res.matchups.push_back({m, std::move(records)});
    }
    res.summary = aggregate(all);
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace pdlab::sim
