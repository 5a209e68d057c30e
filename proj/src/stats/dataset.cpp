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

#include "pdlab/stats/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "pdlab/csv.hpp"
#include "pdlab/error.hpp"

namespace pdlab::stats {

const std::vector<std::string> kTraitColumns = {"trustworthiness", "intelligence", "cooperativeness", "likability",
                                                "fairness",        "agency",       "experience"};
const std::vector<std::string> kSevenCColumns = {"clarity",       "conciseness", "concreteness", "coherence",
                                                 "courteousness", "correctness", "completeness"};

namespace {

const std::vector<std::string> kInteractionColumns = {
    "session_id",       "pairing",        "labeling",       "communication",   "round",
    "participant_id",   "associate_id",   "associate_kind", "own_msg1",        "associate_msg1",
    "own_msg2",         "associate_msg2", "own_choice",     "associate_choice", "own_payoff",
    "associate_payoff", "own_fallback",   "associate_fallback"};

const std::vector<std::string>& questionnaire_header() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = {"session_id", "pairing", "labeling", "participant_id", "norm_lo", "norm_hi"};
    c.insert(c.end(), kTraitColumns.begin(), kTraitColumns.end());
    c.insert(c.end(), kSevenCColumns.begin(), kSevenCColumns.end());
    for (const char* x : {"humanness", "llm_familiarity", "svo", "age", "gender", "field"}) c.emplace_back(x);
    return c;
  }();
  return cols;
}

int to_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) throw Error(Errc::SchemaError, what + ": not an integer: '" + s + "'");
  return v;
}

bool to_flag(const std::string& s, const std::string& what) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw Error(Errc::SchemaError, what + ": expected 0 or 1, got '" + s + "'");
}

game::Choice to_choice(const std::string& s, const std::string& what) {
  auto c = game::parse_choice(s);
  if (!c) throw Error(Errc::SchemaError, what + ": expected A or B, got '" + s + "'");
  return *c;
}

std::optional<game::Choice> to_opt_choice(const std::string& s, const std::string& what) {
  if (s.empty()) return std::nullopt;
  return to_choice(s, what);
}

std::string opt_choice_str(const std::optional<game::Choice>& c) {
  return c ? std::string(game::to_string(*c)) : std::string();
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + p.string());
  return out;
}

std::vector<InteractionRow> read_interactions(const std::filesystem::path& path) {
  const auto t = csv::read_table(path);
  for (const auto& c : kInteractionColumns) t.column(c);
  std::vector<InteractionRow> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string where = path.filename().string() + " row " + std::to_string(i + 2);
    auto at = [&](const char* c) -> const std::string& { return t.at(i, c); };
    InteractionRow r;
    r.session_id = at("session_id");
    r.pairing = at("pairing");
    r.labeling = at("labeling");
    r.communication = to_flag(at("communication"), where);
    r.round = to_int(at("round"), where);
    r.participant_id = at("participant_id");
    r.associate_id = at("associate_id");
    r.associate_kind = at("associate_kind");
    r.own_msg1 = at("own_msg1");
    r.associate_msg1 = at("associate_msg1");
    r.own_msg2 = at("own_msg2");
    r.associate_msg2 = at("associate_msg2");
    r.own_choice = to_choice(at("own_choice"), where);
    r.associate_choice = to_choice(at("associate_choice"), where);
    r.own_payoff = to_int(at("own_payoff"), where);
    r.associate_payoff = to_int(at("associate_payoff"), where);
    r.own_fallback = to_flag(at("own_fallback"), where);
    r.associate_fallback = to_flag(at("associate_fallback"), where);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<QuestionnaireRow> read_questionnaires(const std::filesystem::path& path) {
  const auto t = csv::read_table(path);
  for (const auto& c : questionnaire_header()) t.column(c);
  std::vector<QuestionnaireRow> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string where = path.filename().string() + " row " + std::to_string(i + 2);
    auto at = [&](const std::string& c) -> const std::string& { return t.at(i, c); };
    QuestionnaireRow q;
    q.session_id = at("session_id");
    q.pairing = at("pairing");
    q.labeling = at("labeling");
    q.participant_id = at("participant_id");
    q.norm_lo = to_int(at("norm_lo"), where);
    q.norm_hi = to_int(at("norm_hi"), where);
    for (const auto& c : kTraitColumns) q.traits[c] = to_int(at(c), where);
    for (const auto& c : kSevenCColumns) q.seven_c[c] = to_int(at(c), where);
    if (!at("humanness").empty()) q.humanness = to_int(at("humanness"), where);
    q.llm_familiarity = to_int(at("llm_familiarity"), where);
    q.svo = at("svo");
    q.age = to_int(at("age"), where);
    q.gender = at("gender");
    q.field = at("field");
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

std::string InteractionRow::interaction_id() const {
  const bool p1 = is_p1();
  return session_id + "/" + std::to_string(round) + "/" + (p1 ? participant_id : associate_id) + "/" +
         (p1 ? associate_id : participant_id);
}

bool InteractionRow::is_p1() const { return with_agent() || participant_id < associate_id; }

std::string InteractionRow::treatment() const {
  return pairing + "/" + labeling + (communication ? "" : "/silent");
}

const std::vector<std::string>& annotation_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = {"interaction_id",  "annotator_id",       "resolver",           "agreement",
                                  "p1_preferred",    "p2_preferred",       "p1_desires_from_p2", "p2_desires_from_p1"};
    for (const char* m : kMotives) c.emplace_back(m);
    c.emplace_back("coherent");
    c.emplace_back("error_free");
    return c;
  }();
  return cols;
}

AnnotationSet read_annotations(const std::filesystem::path& path) {
  const auto t = csv::read_table(path);
  for (const auto& c : annotation_columns()) t.column(c);
  AnnotationSet set;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string where = path.filename().string() + " row " + std::to_string(i + 2);
    auto at = [&](const std::string& c) -> const std::string& { return t.at(i, c); };
    AnnotationRecord r;
    r.interaction_id = at("interaction_id");
    r.annotator_id = at("annotator_id");
    if (r.interaction_id.empty() || r.annotator_id.empty()) throw Error(Errc::SchemaError, where + ": missing id");
    if (!seen.emplace(r.interaction_id, r.annotator_id).second) {
      throw Error(Errc::SchemaError, where + ": duplicate annotation by " + r.annotator_id);
    }
    r.resolved_by_third = to_flag(at("resolver"), where);
    r.agreement_reached = to_flag(at("agreement"), where);
    r.p1_preferred = to_opt_choice(at("p1_preferred"), where);
    r.p2_preferred = to_opt_choice(at("p2_preferred"), where);
    r.p1_desires_from_p2 = to_opt_choice(at("p1_desires_from_p2"), where);
    r.p2_desires_from_p1 = to_opt_choice(at("p2_desires_from_p1"), where);
    set.records.push_back(r);

    int filled = 0;
    const int total = static_cast<int>(std::size(kMotives)) + 2;
    for (const char* m : kMotives) filled += !at(m).empty();
    filled += !at("coherent").empty();
    filled += !at("error_free").empty();
    if (filled == 0) continue;
    if (filled != total) throw Error(Errc::SchemaError, where + ": motive ratings partially filled");
    MotiveRating m{r.interaction_id, r.annotator_id, {}, to_flag(at("coherent"), where),
                   to_flag(at("error_free"), where)};
    for (const char* name : kMotives) {
      const int v = to_int(at(name), where);
      if (v < -3 || v > 3) throw Error(Errc::SchemaError, where + ": " + name + " outside [-3, 3]");
      m.scores[name] = v;
    }
    set.motives.push_back(std::move(m));
  }
  return set;
}

void write_annotations(const std::filesystem::path& path, const AnnotationSet& set) {
  auto out = open_out(path);
  csv::write_row(out, annotation_columns());
  std::map<std::pair<std::string, std::string>, const MotiveRating*> motives;
  for (const auto& m : set.motives) motives[{m.interaction_id, m.annotator_id}] = &m;
  for (const auto& r : set.records) {
    csv::Row row = {r.interaction_id,
                    r.annotator_id,
                    r.resolved_by_third ? "1" : "0",
                    r.agreement_reached ? "1" : "0",
                    opt_choice_str(r.p1_preferred),
                    opt_choice_str(r.p2_preferred),
                    opt_choice_str(r.p1_desires_from_p2),
                    opt_choice_str(r.p2_desires_from_p1)};
    auto it = motives.find({r.interaction_id, r.annotator_id});
    if (it == motives.end()) {
      row.resize(annotation_columns().size());
    } else {
      for (const char* name : kMotives) row.push_back(std::to_string(it->second->scores.at(name)));
      row.push_back(it->second->coherent ? "1" : "0");
      row.push_back(it->second->error_free ? "1" : "0");
    }
    csv::write_row(out, row);
  }
}

ResolvedAgreements resolve_agreements(const std::vector<AnnotationRecord>& records) {
  struct Votes {
    std::vector<bool> primary;
    std::optional<bool> resolver;
  };
  std::map<std::string, Votes> by_id;
  for (const auto& r : records) {
    auto& v = by_id[r.interaction_id];
    if (r.resolved_by_third) {
      v.resolver = r.agreement_reached;
    } else {
      v.primary.push_back(r.agreement_reached);
    }
  }
  ResolvedAgreements out;
  for (const auto& [id, v] : by_id) {
    const bool unanimous =
        !v.primary.empty() && std::all_of(v.primary.begin(), v.primary.end(), [&](bool b) { return b == v.primary[0]; });
    if (unanimous) {
      out.agreement[id] = v.primary[0];
    } else if (v.resolver) {
      out.agreement[id] = *v.resolver;
    } else {
      out.excluded.push_back(id);
    }
  }
  return out;
}

std::vector<std::pair<std::string, TestResult>> motive_summary(const std::vector<MotiveRating>& ratings,
                                                               Alternative alt) {
  if (ratings.empty()) throw Error(Errc::InsufficientData, "no motive ratings");
  std::vector<std::pair<std::string, TestResult>> out;
  for (const char* name : kMotives) {
    std::vector<double> xs;
    xs.reserve(ratings.size());
    for (const auto& r : ratings) xs.push_back(r.scores.at(name));
    auto res = wilcoxon_signed_rank(xs, 0.0, alt);
    res.test = std::string("wilcoxon:") + name;
    out.emplace_back(name, std::move(res));
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& dir) {
  const auto inter = dir / "interactions.csv";
  const auto quest = dir / "questionnaire.csv";
  if (!std::filesystem::exists(inter)) throw Error(Errc::IoError, "missing " + inter.string());
  Dataset d;
  d.interactions = read_interactions(inter);
  if (std::filesystem::exists(quest)) d.questionnaires = read_questionnaires(quest);
  const auto ann = dir / "annotations.csv";
  if (std::filesystem::exists(ann)) d.annotations = read_annotations(ann);
  return d;
}

void merge(Dataset& into, Dataset other) {
  into.interactions.insert(into.interactions.end(), std::make_move_iterator(other.interactions.begin()),
                           std::make_move_iterator(other.interactions.end()));
  into.questionnaires.insert(into.questionnaires.end(), std::make_move_iterator(other.questionnaires.begin()),
                             std::make_move_iterator(other.questionnaires.end()));
  if (other.annotations) {
    if (!into.annotations) into.annotations.emplace();
    auto& a = *into.annotations;
    a.records.insert(a.records.end(), other.annotations->records.begin(), other.annotations->records.end());
    a.motives.insert(a.motives.end(), other.annotations->motives.begin(), other.annotations->motives.end());
  }
}

void save_dataset(const Dataset& d, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "interactions.csv");
    csv::write_row(out, kInteractionColumns);
    for (const auto& r : d.interactions) {
      csv::write_row(out, {r.session_id, r.pairing, r.labeling, r.communication ? "1" : "0", std::to_string(r.round),
                           r.participant_id, r.associate_id, r.associate_kind, r.own_msg1, r.associate_msg1,
                           r.own_msg2, r.associate_msg2, std::string(game::to_string(r.own_choice)),
                           std::string(game::to_string(r.associate_choice)), std::to_string(r.own_payoff),
                           std::to_string(r.associate_payoff), r.own_fallback ? "1" : "0",
                           r.associate_fallback ? "1" : "0"});
    }
  }
  {
    auto out = open_out(dir / "questionnaire.csv");
    csv::write_row(out, questionnaire_header());
    for (const auto& q : d.questionnaires) {
      csv::Row row = {q.session_id, q.pairing, q.labeling, q.participant_id, std::to_string(q.norm_lo),
                      std::to_string(q.norm_hi)};
      for (const auto& c : kTraitColumns) row.push_back(std::to_string(q.traits.at(c)));
      for (const auto& c : kSevenCColumns) row.push_back(std::to_string(q.seven_c.at(c)));
      row.push_back(q.humanness ? std::to_string(*q.humanness) : "");
      row.push_back(std::to_string(q.llm_familiarity));
      row.push_back(q.svo);
      row.push_back(std::to_string(q.age));
      row.push_back(q.gender);
      row.push_back(q.field);
      csv::write_row(out, row);
    }
  }
  const auto ann = dir / "annotations.csv";
  if (d.annotations) {
    write_annotations(ann, *d.annotations);
  } else {
    std::filesystem::remove(ann);
  }
}

void check_complete(const Dataset& d) {
  if (d.interactions.empty()) throw Error(Errc::DatasetIncomplete, "dataset has no interactions");
  std::map<std::string, std::map<std::string, std::set<int>>> rounds;  // session -> participant -> rounds
  for (const auto& r : d.interactions) {
    if (!rounds[r.session_id][r.participant_id].insert(r.round).second) {
      throw Error(Errc::DatasetIncomplete, "participant " + r.participant_id + " has round " +
                                               std::to_string(r.round) + " twice in session " + r.session_id);
    }
  }
  for (const auto& [session, people] : rounds) {
    const auto expected = people.begin()->second.size();
    for (const auto& [pid, rs] : people) {
      if (rs.size() != expected) {
        throw Error(Errc::DatasetIncomplete, "participant " + pid + " in session " + session + " played " +
                                                 std::to_string(rs.size()) + " rounds, expected " +
                                                 std::to_string(expected));
      }
    }
  }
  for (const auto& q : d.questionnaires) {
    auto s = rounds.find(q.session_id);
    if (s == rounds.end() || !s->second.count(q.participant_id)) {
      throw Error(Errc::DatasetIncomplete,
                  "questionnaire for " + q.participant_id + " who has no interactions in " + q.session_id);
    }
  }
}

}  // namespace pdlab::stats
