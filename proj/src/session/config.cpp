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

#include "pdlab/session/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pdlab/agent/prompts.hpp"
#include "pdlab/error.hpp"

namespace pdlab::session::assets {
extern const std::string_view kInstructions;
extern const std::string_view kCommunication;
}  // namespace pdlab::session::assets

namespace pdlab::session {

using nlohmann::json;

std::string_view to_string(Pairing p) {
  switch (p) {
    case Pairing::HH: return "HH";
    case Pairing::HF: return "HF";
    case Pairing::HC: return "HC";
    case Pairing::HS: return "HS";
  }
  return "?";
}

std::string_view to_string(Labeling l) { return l == Labeling::Informed ? "informed" : "uninformed"; }

std::optional<Pairing> parse_pairing(std::string_view s) {
  for (Pairing p : {Pairing::HH, Pairing::HF, Pairing::HC, Pairing::HS}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

std::optional<Labeling> parse_labeling(std::string_view s) {
  if (s == "informed") return Labeling::Informed;
  if (s == "uninformed") return Labeling::Uninformed;
  return std::nullopt;
}

std::optional<agent::PersonaKind> agent_persona(Pairing p) {
  switch (p) {
    case Pairing::HF: return agent::PersonaKind::Fair;
    case Pairing::HC: return agent::PersonaKind::Cooperative;
    case Pairing::HS: return agent::PersonaKind::Selfish;
    case Pairing::HH: break;
  }
  return std::nullopt;
}

std::string associate_label(const Treatment& t) {
  if (t.labeling == Labeling::Uninformed) return "intelligent machines or humans";
  return t.pairing == Pairing::HH ? "humans" : "intelligent machines";
}

std::string Money::to_string() const {
  const auto abs = cents < 0 ? -cents : cents;
  std::ostringstream out;
  out << (cents < 0 ? "-" : "") << abs / 100 << '.' << (abs % 100 < 10 ? "0" : "") << abs % 100;
  return out.str();
}

Money Money::parse(std::string_view text) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw Error(Errc::InvalidArgument, "not a currency amount: '" + s + "'");
  }
  return Money{std::llround(v * 100)};
}

std::vector<NormBin> make_norm_bins(int width) {
  if (width <= 0 || 100 % width != 0) throw Error(Errc::ConfigInvalid, "norm_bin_width must divide 100");
  std::vector<NormBin> bins;
  for (int lo = 0; lo < 100; lo += width) bins.push_back({lo, lo + width, lo + width == 100});
  return bins;
}

std::vector<std::string> SessionConfig::default_battery() {
  return {"norm", "traits", "seven_c", "humanness", "llm_familiarity", "svo", "demographics"};
}

game::RoundRules SessionConfig::round_rules() const { return {payoff, timers, treatment.communication}; }

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::ConfigInvalid, what); }

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> known) {
  if (!obj.is_object()) invalid(where + " must be an object");
  for (const auto& [k, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) invalid("unknown key '" + where + k + "'");
  }
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    invalid("bad value for '" + where + key + "'");
  }
}

std::chrono::milliseconds seconds(const json& obj, const std::string& key, const std::string& where) {
  const auto s = get<double>(obj, key, where);
  if (!std::isfinite(s)) invalid("bad value for '" + where + key + "'");
  return std::chrono::milliseconds{std::llround(s * 1000)};
}

double ms_to_seconds(std::chrono::milliseconds ms) { return static_cast<double>(ms.count()) / 1000.0; }

const std::set<std::string>& known_pages() {
  static const std::set<std::string> pages = [] {
    auto b = SessionConfig::default_battery();
    return std::set<std::string>(b.begin(), b.end());
  }();
  return pages;
}

}  // namespace

void validate(const SessionConfig& c) {
  if (c.rounds < 1) invalid("rounds must be at least 1");
  for (auto t : {c.timers.compose, c.timers.read, c.timers.decide, c.timers.results, c.questionnaire_timeout}) {
    if (t.count() <= 0) invalid("timers must be positive");
  }
  if (c.exchange_rate_micros < 0) invalid("exchange_rate must be non-negative");
  if (c.show_up_fee.cents < 0 || c.norm_bonus.cents < 0) invalid("fees must be non-negative");
  if (c.norm_bins.empty()) invalid("norm bins must not be empty");
  for (std::size_t i = 0; i < c.norm_bins.size(); ++i) {
    const auto& b = c.norm_bins[i];
    if (b.lo >= b.hi || (i > 0 && c.norm_bins[i - 1].hi != b.lo)) invalid("norm bins must be contiguous");
  }
  std::set<std::string> seen;
  for (const auto& page : c.questionnaire_battery) {
    if (!known_pages().count(page)) invalid("unknown questionnaire page '" + page + "'");
    if (!seen.insert(page).second) invalid("questionnaire page listed twice: '" + page + "'");
  }
  for (const auto& [key, _] : c.instructions) {
    const auto slash = key.find('/');
    if (slash == std::string::npos || !parse_pairing(key.substr(0, slash)) || !parse_labeling(key.substr(slash + 1))) {
      invalid("instruction key must look like 'HF/informed': '" + key + "'");
    }
  }
  for (const auto& q : c.quiz) {
    if (q.id.empty() || q.answer.empty()) invalid("quiz items need an id and an answer");
  }
  if (c.agent.backend != "mock" && c.agent.backend != "http") invalid("agent.backend must be 'mock' or 'http'");
  if (c.agent.timeout.count() <= 0) invalid("agent.timeout must be positive");
  if (c.agent.max_retries < 0) invalid("agent.max_retries must be non-negative");
  const auto params = json::parse(c.agent.params_json, nullptr, false);
  if (params.is_discarded() || !params.is_object()) invalid("agent.params must be an object");
}

SessionConfig parse_config(const json& j) {
  SessionConfig c;
  reject_unknown(j, "",
                 {"rounds", "timers", "payoff", "exchange_rate", "show_up_fee", "norm_bonus", "currency", "treatment",
                  "seed", "questionnaire_battery", "norm_bin_width", "questionnaire_timeout", "quiz", "instructions",
                  "agent"});
  if (j.contains("rounds")) c.rounds = get<int>(j, "rounds", "");
  if (j.contains("timers")) {
    const auto& t = j["timers"];
    reject_unknown(t, "timers.", {"compose", "read", "decide", "results"});
    if (t.contains("compose")) c.timers.compose = seconds(t, "compose", "timers.");
    if (t.contains("read")) c.timers.read = seconds(t, "read", "timers.");
    if (t.contains("decide")) c.timers.decide = seconds(t, "decide", "timers.");
    if (t.contains("results")) c.timers.results = seconds(t, "results", "timers.");
  }
  if (j.contains("payoff")) {
    const auto& p = j["payoff"];
    reject_unknown(p, "payoff.", {"mutual_coop", "mutual_defect", "sucker", "temptation"});
    try {
      c.payoff = game::PayoffMatrix(get<int>(p, "mutual_coop", "payoff."), get<int>(p, "mutual_defect", "payoff."),
                                    get<int>(p, "sucker", "payoff."), get<int>(p, "temptation", "payoff."));
    } catch (const Error& e) {
      if (e.code() != Errc::InvalidPayoff) throw;
      invalid(e.what());
    }
  }
  if (j.contains("exchange_rate")) c.exchange_rate_micros = std::llround(get<double>(j, "exchange_rate", "") * 1e6);
  if (j.contains("show_up_fee")) c.show_up_fee = Money{std::llround(get<double>(j, "show_up_fee", "") * 100)};
  if (j.contains("norm_bonus")) c.norm_bonus = Money{std::llround(get<double>(j, "norm_bonus", "") * 100)};
  if (j.contains("currency")) c.currency = get<std::string>(j, "currency", "");
  if (j.contains("treatment")) {
    const auto& t = j["treatment"];
    reject_unknown(t, "treatment.", {"pairing", "labeling", "communication"});
    if (t.contains("pairing")) {
      auto p = parse_pairing(get<std::string>(t, "pairing", "treatment."));
      if (!p) invalid("treatment.pairing must be one of HH, HF, HC, HS");
      c.treatment.pairing = *p;
    }
    if (t.contains("labeling")) {
      auto l = parse_labeling(get<std::string>(t, "labeling", "treatment."));
      if (!l) invalid("treatment.labeling must be 'informed' or 'uninformed'");
      c.treatment.labeling = *l;
    }
    if (t.contains("communication")) c.treatment.communication = get<bool>(t, "communication", "treatment.");
  }
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed", "");
  if (j.contains("questionnaire_battery")) {
    c.questionnaire_battery = get<std::vector<std::string>>(j, "questionnaire_battery", "");
  }
  if (j.contains("norm_bin_width")) c.norm_bins = make_norm_bins(get<int>(j, "norm_bin_width", ""));
  if (j.contains("questionnaire_timeout")) c.questionnaire_timeout = seconds(j, "questionnaire_timeout", "");
  if (j.contains("quiz")) {
    if (!j["quiz"].is_array()) invalid("quiz must be an array");
    for (const auto& q : j["quiz"]) {
      reject_unknown(q, "quiz[].", {"id", "question", "options", "answer"});
      QuizItem item;
      item.id = get<std::string>(q, "id", "quiz[].");
      item.question = q.value("question", "");
      if (q.contains("options")) item.options = get<std::vector<std::string>>(q, "options", "quiz[].");
      item.answer = get<std::string>(q, "answer", "quiz[].");
      c.quiz.push_back(std::move(item));
    }
  }
  if (j.contains("instructions")) c.instructions = get<std::map<std::string, std::string>>(j, "instructions", "");
  if (j.contains("agent")) {
    const auto& a = j["agent"];
    reject_unknown(a, "agent.",
                   {"backend", "memory", "example_dialogues", "params", "timeout", "max_retries", "http", "mock"});
    if (a.contains("backend")) c.agent.backend = get<std::string>(a, "backend", "agent.");
    if (a.contains("memory")) {
      const auto m = get<std::string>(a, "memory", "agent.");
      if (m == "persistent") {
        c.agent.memory = AgentMemory::Persistent;
      } else if (m == "fresh") {
        c.agent.memory = AgentMemory::FreshPerRound;
      } else {
        invalid("agent.memory must be 'persistent' or 'fresh'");
      }
    }
    if (a.contains("example_dialogues")) c.agent.example_dialogues = get<std::string>(a, "example_dialogues", "agent.");
    if (a.contains("params")) {
      if (!a["params"].is_object()) invalid("agent.params must be an object");
      c.agent.params_json = a["params"].dump();
    }
    if (a.contains("timeout")) c.agent.timeout = seconds(a, "timeout", "agent.");
    if (a.contains("max_retries")) c.agent.max_retries = get<int>(a, "max_retries", "agent.");
    if (a.contains("http")) {
      const auto& h = a["http"];
      reject_unknown(h, "agent.http.", {"id", "base_url", "path", "model", "api_key_env"});
      c.agent.http.id = h.value("id", c.agent.http.id);
      c.agent.http.base_url = h.value("base_url", c.agent.http.base_url);
      c.agent.http.path = h.value("path", c.agent.http.path);
      c.agent.http.model = h.value("model", c.agent.http.model);
      c.agent.http.api_key_env = h.value("api_key_env", c.agent.http.api_key_env);
    }
    if (a.contains("mock")) {
      const auto& m = a["mock"];
      reject_unknown(m, "agent.mock.", {"selfish_defect_probability", "fair_risk_probability"});
      if (m.contains("selfish_defect_probability")) {
        c.agent.mock.selfish_defect_probability = get<double>(m, "selfish_defect_probability", "agent.mock.");
      }
      if (m.contains("fair_risk_probability")) {
        c.agent.mock.fair_risk_probability = get<double>(m, "fair_risk_probability", "agent.mock.");
      }
    }
  }
  validate(c);
  return c;
}

SessionConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  const auto j = json::parse(in, nullptr, false);
  if (j.is_discarded()) invalid(path.string() + " is not valid JSON");
  return parse_config(j);
}

json to_json(const SessionConfig& c) {
  json quiz = json::array();
  for (const auto& q : c.quiz) {
    quiz.push_back({{"id", q.id}, {"question", q.question}, {"options", q.options}, {"answer", q.answer}});
  }
  const int width = c.norm_bins.front().hi - c.norm_bins.front().lo;
  return {
      {"rounds", c.rounds},
      {"timers",
       {{"compose", ms_to_seconds(c.timers.compose)},
        {"read", ms_to_seconds(c.timers.read)},
        {"decide", ms_to_seconds(c.timers.decide)},
        {"results", ms_to_seconds(c.timers.results)}}},
      {"payoff",
       {{"mutual_coop", c.payoff.mutual_coop()},
        {"mutual_defect", c.payoff.mutual_defect()},
        {"sucker", c.payoff.sucker()},
        {"temptation", c.payoff.temptation()}}},
      {"exchange_rate", static_cast<double>(c.exchange_rate_micros) / 1e6},
      {"show_up_fee", static_cast<double>(c.show_up_fee.cents) / 100},
      {"norm_bonus", static_cast<double>(c.norm_bonus.cents) / 100},
      {"currency", c.currency},
      {"treatment",
       {{"pairing", to_string(c.treatment.pairing)},
        {"labeling", to_string(c.treatment.labeling)},
        {"communication", c.treatment.communication}}},
      {"seed", c.seed},
      {"questionnaire_battery", c.questionnaire_battery},
      {"norm_bin_width", width},
      {"questionnaire_timeout", ms_to_seconds(c.questionnaire_timeout)},
      {"quiz", quiz},
      {"instructions", c.instructions},
      {"agent",
       {{"backend", c.agent.backend},
        {"memory", c.agent.memory == AgentMemory::Persistent ? "persistent" : "fresh"},
        {"example_dialogues", c.agent.example_dialogues},
        {"params", json::parse(c.agent.params_json)},
        {"timeout", ms_to_seconds(c.agent.timeout)},
        {"max_retries", c.agent.max_retries},
        {"http",
         {{"id", c.agent.http.id},
          {"base_url", c.agent.http.base_url},
          {"path", c.agent.http.path},
          {"model", c.agent.http.model},
          {"api_key_env", c.agent.http.api_key_env}}},
        {"mock",
         {{"selfish_defect_probability", c.agent.mock.selfish_defect_probability},
          {"fair_risk_probability", c.agent.mock.fair_risk_probability}}}}},
  };
}

namespace {

std::string seconds_text(std::chrono::milliseconds ms) {
  std::ostringstream out;
  out << ms_to_seconds(ms);
  return out.str();
}

std::string rate_text(std::int64_t micros) {
  std::ostringstream out;
  out << static_cast<double>(micros) / 1e6;
  return out.str();
}

}  // namespace

std::string instruction_text(const SessionConfig& c) {
  const std::string key =
      std::string(to_string(c.treatment.pairing)) + "/" + std::string(to_string(c.treatment.labeling));
  const auto it = c.instructions.find(key);
  const std::string_view base = it != c.instructions.end() ? std::string_view(it->second) : assets::kInstructions;

  agent::TemplateValues v{
      {"ROUNDS", std::to_string(c.rounds)},
      {"ASSOCIATE_LABEL", associate_label(c.treatment)},
      {"MUTUAL_COOPERATION_PAYOFF", std::to_string(c.payoff.mutual_coop())},
      {"MUTUAL_DEFECTION_PAYOFF", std::to_string(c.payoff.mutual_defect())},
      {"SUCKER_PAYOFF", std::to_string(c.payoff.sucker())},
      {"TEMPTATION_PAYOFF", std::to_string(c.payoff.temptation())},
      {"COMPOSE_SECONDS", seconds_text(c.timers.compose)},
      {"READ_SECONDS", seconds_text(c.timers.read)},
      {"DECIDE_SECONDS", seconds_text(c.timers.decide)},
      {"RESULTS_SECONDS", seconds_text(c.timers.results)},
      {"SHOW_UP_FEE", c.show_up_fee.to_string()},
      {"EXCHANGE_RATE", rate_text(c.exchange_rate_micros)},
      {"CURRENCY", c.currency},
  };
  v["COMMUNICATION_PARAGRAPH"] =
      c.treatment.communication ? agent::render_template(assets::kCommunication, v) : std::string();
  return agent::render_template(base, v);
}

std::vector<QuizItem> quiz_items(const SessionConfig& c) {
  if (!c.quiz.empty()) return c.quiz;
  std::vector<QuizItem> items;
  const char* labels = "AB";
  for (int own = 0; own < 2; ++own) {
    for (int other = 0; other < 2; ++other) {
      const auto o = own == 0 ? game::Choice::A : game::Choice::B;
      const auto a = other == 0 ? game::Choice::A : game::Choice::B;
      QuizItem q;
      q.id = std::string("payoff_") + labels[own] + labels[other];
      q.question = std::string("If you pick ") + labels[own] + " and your associate picks " + labels[other] +
                   ", how many points do you earn?";
      q.answer = std::to_string(c.payoff.payoff(o, a));
      items.push_back(std::move(q));
    }
  }
  return items;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

QuizOutcome quiz_gate(const std::map<std::string, std::string>& answers, const std::vector<QuizItem>& key) {
  for (const auto& item : key) {
    const auto it = answers.find(item.id);
    if (it == answers.end() || trim(it->second) != trim(item.answer)) return QuizOutcome::Retake;
  }
  return QuizOutcome::Pass;
}

}  // namespace pdlab::session
