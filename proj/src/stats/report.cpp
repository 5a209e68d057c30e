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

#include "pdlab/stats/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "json.hpp"
#include "pdlab/csv.hpp"
#include "pdlab/error.hpp"
#include "pdlab/stats/glm.hpp"

namespace pdlab::stats {

namespace {

const std::vector<std::string> kPairingOrder = {"HH", "HF", "HC", "HS"};

int pairing_rank(const std::string& p) {
  auto it = std::find(kPairingOrder.begin(), kPairingOrder.end(), p);
  return it == kPairingOrder.end() ? static_cast<int>(kPairingOrder.size()) : static_cast<int>(it - kPairingOrder.begin());
}

std::string setting_of(const std::string& labeling, bool communication) {
  return labeling + (communication ? "" : "/silent");
}

// Treatment = pairing within a setting.
struct Treatment {
  std::string setting;
  std::string pairing;

  std::string name() const { return pairing + "/" + setting; }
  auto key() const { return std::make_tuple(setting, pairing_rank(pairing), pairing); }
  bool operator<(const Treatment& o) const { return key() < o.key(); }
};

Treatment treatment_of(const InteractionRow& r) { return {setting_of(r.labeling, r.communication), r.pairing}; }

std::string fmt(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "NA" : (v > 0 ? "Inf" : "-Inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

double mean(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return xs.empty() ? NAN : s / static_cast<double>(xs.size());
}

double sd(const std::vector<double>& xs) {
  if (xs.size() < 2) return NAN;
  const double m = mean(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double median(std::vector<double> xs) {
  if (xs.empty()) return NAN;
  std::sort(xs.begin(), xs.end());
  const auto n = xs.size();
  return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

class Writer {
 public:
  explicit Writer(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::string write(const std::string& file, const csv::Row& header, const std::vector<csv::Row>& rows) {
    std::ofstream out(dir_ / file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + (dir_ / file).string());
    csv::write_row(out, header);
    for (const auto& r : rows) csv::write_row(out, r);
    return file;
  }

 private:
  std::filesystem::path dir_;
};

// Pairwise and one-sample results destined for tests.csv.
struct TestLog {
  std::vector<csv::Row> rows;

  void add(const std::string& section, const std::string& setting, const std::string& measure,
           const std::string& first, const std::string& second, const std::function<TestResult()>& run) {
    try {
      const auto r = run();
      rows.push_back({section, setting, measure, first, second, r.test, r.statistic_name, fmt(r.statistic),
                      fmt(r.df), fmt(r.p_value), fmt(r.effect_size), r.exact ? "1" : "0", ""});
    } catch (const Error& e) {
      rows.push_back({section, setting, measure, first, second, "", "", "", "", "", "", "",
                      std::string(to_string(e.code()))});
    }
  }
};

const csv::Row kTestHeader = {"section", "setting", "measure", "first", "second", "test", "statistic_name",
                              "statistic", "df", "p_value", "effect_size", "exact", "error"};

struct Participant {
  Treatment treatment;
  std::string session_id;
  std::string participant_id;
  int rounds = 0;
  int cooperations = 0;
  int associate_cooperations = 0;
  // Agreements reached and associate breaches among them, when annotated.
  int agreements = 0;
  int associate_breaches = 0;
  const QuestionnaireRow* questionnaire = nullptr;

  double rate() const { return rounds ? static_cast<double>(cooperations) / rounds : NAN; }
};

using ParticipantKey = std::pair<std::string, std::string>;  // session, participant

std::map<ParticipantKey, Participant> collect_participants(const Dataset& d, const ResolvedAgreements* resolved) {
  std::map<ParticipantKey, Participant> out;
  for (const auto& r : d.interactions) {
    auto& p = out[{r.session_id, r.participant_id}];
    p.treatment = treatment_of(r);
    p.session_id = r.session_id;
    p.participant_id = r.participant_id;
    ++p.rounds;
    p.cooperations += r.own_choice == game::Choice::A;
    p.associate_cooperations += r.associate_choice == game::Choice::A;
    if (resolved) {
      auto it = resolved->agreement.find(r.interaction_id());
      if (it != resolved->agreement.end() && it->second) {
        ++p.agreements;
        p.associate_breaches += derive_breach(true, r.associate_choice);
      }
    }
  }
  for (const auto& q : d.questionnaires) {
    auto it = out.find({q.session_id, q.participant_id});
    if (it != out.end()) it->second.questionnaire = &q;
  }
  return out;
}

// Participants grouped by treatment, in treatment order.
std::map<Treatment, std::vector<const Participant*>> by_treatment(const std::map<ParticipantKey, Participant>& ps) {
  std::map<Treatment, std::vector<const Participant*>> out;
  for (const auto& [k, p] : ps) out[p.treatment].push_back(&p);
  return out;
}

// Calls fn(setting, a, b) for every pair of treatments sharing a setting.
template <typename Map, typename Fn>
void for_each_pair(const Map& groups, Fn fn) {
  for (auto i = groups.begin(); i != groups.end(); ++i) {
    for (auto j = std::next(i); j != groups.end(); ++j) {
      if (i->first.setting == j->first.setting) fn(i->first.setting, *i, *j);
    }
  }
}

}  // namespace

const SectionStatus* ReportManifest::section(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const std::vector<std::string>& report_sections() {
  static const std::vector<std::string> names = {
      "cooperation", "anova", "agreement_breach", "breach_curve", "norm_estimates", "traits",
      "seven_c",     "glm_questionnaire", "motives", "humanness", "spearman", "tests"};
  return names;
}

std::vector<AgreementBreachRow> agreement_breach_counts(const Dataset& d, const ResolvedAgreements& resolved) {
  std::map<std::pair<Treatment, int>, AgreementBreachRow> rows;  // side 0 human, 1 associate
  for (const auto& r : d.interactions) {
    auto it = resolved.agreement.find(r.interaction_id());
    if (it == resolved.agreement.end()) continue;
    const bool agreement = it->second;
    const auto t = treatment_of(r);
    auto& h = rows[{t, 0}];
    h.treatment = t.name();
    h.side = "human";
    ++h.interactions;
    h.agreements += agreement;
    h.breaches += derive_breach(agreement, r.own_choice);
    if (r.with_agent()) {
      auto& a = rows[{t, 1}];
      a.treatment = t.name();
      a.side = "associate";
      ++a.interactions;
      a.agreements += agreement;
      a.breaches += derive_breach(agreement, r.associate_choice);
    }
  }
  std::vector<AgreementBreachRow> out;
  for (auto& [k, v] : rows) out.push_back(v);
  return out;
}

ReportManifest emit_report(const Dataset& d, const std::filesystem::path& dir, const ReportOptions& options) {
  check_complete(d);
  std::filesystem::create_directories(dir);
  Writer w(dir);
  TestLog tests;
  ReportManifest manifest;
  manifest.sections.reserve(report_sections().size());
  auto section = [&](const std::string& name) -> SectionStatus& {
    manifest.sections.push_back({name, false, "", {}});
    return manifest.sections.back();
  };

  std::optional<ResolvedAgreements> resolved;
  if (d.annotations) {
    resolved = resolve_agreements(d.annotations->records);
    manifest.excluded_interactions = resolved->excluded.size();
  }
  const auto participants = collect_participants(d, resolved ? &*resolved : nullptr);
  const auto groups = by_treatment(participants);

  // Cooperation rates per treatment, humans and their associates.
  {
    auto& s = section("cooperation");
    std::vector<csv::Row> rows;
    for (const auto& [t, ps] : groups) {
      long rounds = 0, coop = 0, assoc = 0;
      std::vector<double> rates;
      for (const auto* p : ps) {
        rounds += p->rounds;
        coop += p->cooperations;
        assoc += p->associate_cooperations;
        rates.push_back(p->rate());
      }
      rows.push_back({t.name(), t.pairing, t.setting, std::to_string(ps.size()), std::to_string(rounds),
                      std::to_string(coop), fmt(static_cast<double>(coop) / rounds), fmt(sd(rates)),
                      std::to_string(assoc), fmt(static_cast<double>(assoc) / rounds)});
    }
    s.files.push_back(w.write("cooperation_rates.csv",
                              {"treatment", "pairing", "setting", "participants", "rounds", "cooperations", "rate",
                               "participant_sd", "associate_cooperations", "associate_rate"},
                              rows));
    s.available = true;
    for_each_pair(groups, [&](const std::string& setting, const auto& a, const auto& b) {
      std::vector<double> x, y;
      for (const auto* p : a.second) x.push_back(p->rate());
      for (const auto* p : b.second) y.push_back(p->rate());
      tests.add("cooperation", setting, "cooperation_rate", a.first.name(), b.first.name(), [&] {
        auto r = mann_whitney_u(x, y);
        try {
          r.effect_size = cohen_d(x, y);
        } catch (const Error&) {
        }
        return r;
      });
    });
  }

  // One-way ANOVA and Tukey HSD on participant cooperation rates per setting.
  {
    auto& s = section("anova");
    std::map<std::string, std::vector<std::pair<std::string, std::vector<double>>>> per_setting;
    for (const auto& [t, ps] : groups) {
      std::vector<double> xs;
      for (const auto* p : ps) xs.push_back(p->rate());
      per_setting[t.setting].emplace_back(t.pairing, std::move(xs));
    }
    std::vector<csv::Row> anova_rows, tukey_rows;
    std::vector<std::string> notes;
    for (const auto& [setting, named] : per_setting) {
      std::vector<std::vector<double>> samples;
      for (const auto& [n, xs] : named) samples.push_back(xs);
      try {
        const auto a = anova_table(samples);
        const auto h = tukey_hsd(samples);
        anova_rows.push_back({setting, "treatment", fmt(a.df_between), fmt(a.ss_between), fmt(a.f), fmt(a.p_value)});
        anova_rows.push_back({setting, "residual", fmt(a.df_within), fmt(a.ss_within), "", ""});
        for (const auto& r : h) {
          tukey_rows.push_back({setting, named[r.first].first, named[r.second].first, fmt(r.difference),
                                fmt(r.lower), fmt(r.upper), fmt(r.p_adjusted)});
        }
      } catch (const Error& e) {
        notes.push_back(setting + ": " + std::string(to_string(e.code())));
      }
    }
    if (!anova_rows.empty()) {
      s.available = true;
      s.files.push_back(w.write("anova.csv", {"setting", "source", "df", "sum_sq", "f", "p_value"}, anova_rows));
      s.files.push_back(w.write("tukey.csv", {"setting", "first", "second", "difference", "lower", "upper", "p_adjusted"},
                                tukey_rows));
    }
    s.reason = notes.empty() ? "" : "skipped " + [&] {
      std::string j;
      for (const auto& n : notes) j += (j.empty() ? "" : "; ") + n;
      return j;
    }();
  }

  // Agreement and breach percentages.
  {
    auto& s = section("agreement_breach");
    if (!resolved) {
      s.reason = "no annotations";
    } else {
      const auto counts = agreement_breach_counts(d, *resolved);
      std::vector<csv::Row> rows;
      std::map<std::string, std::map<Treatment, const AgreementBreachRow*>> by_side;
      for (const auto& c : counts) {
        const double ar = c.interactions ? static_cast<double>(c.agreements) / c.interactions : NAN;
        const double br = c.agreements ? static_cast<double>(c.breaches) / c.agreements : NAN;
        rows.push_back({c.treatment, c.side, std::to_string(c.interactions), std::to_string(c.agreements), fmt(ar),
                        std::to_string(c.breaches), fmt(br)});
      }
      for (const auto& [t, ps] : groups) {
        for (const auto& c : counts) {
          if (c.treatment == t.name()) by_side[c.side][t] = &c;
        }
      }
      s.files.push_back(w.write("agreement_breach.csv",
                                {"treatment", "side", "interactions", "agreements", "agreement_rate", "breaches",
                                 "breach_rate"},
                                rows));
      s.available = !rows.empty();
      if (rows.empty()) s.reason = "no annotated interactions";
      for (const auto& [side, m] : by_side) {
        for_each_pair(m, [&](const std::string& setting, const auto& a, const auto& b) {
          const auto* x = a.second;
          const auto* y = b.second;
          if (side == "human") {
            tests.add("agreement_breach", setting, "agreement_rate", a.first.name(), b.first.name(),
                      [&] { return proportions_ztest(x->agreements, x->interactions, y->agreements, y->interactions); });
          }
          tests.add("agreement_breach", setting, side + "_breach_rate", a.first.name(), b.first.name(),
                    [&] { return proportions_ztest(x->breaches, x->agreements, y->breaches, y->agreements); });
        });
      }
    }
  }

  // Human cooperation against associate breach frequency.
  {
    auto& s = section("breach_curve");
    if (!resolved) {
      s.reason = "no annotations";
    } else {
      std::map<std::string, std::vector<BreachExposure>> by_setting;
      for (const auto& [k, p] : participants) {
        if (p.treatment.pairing == "HH" || p.agreements == 0) continue;
        by_setting[p.treatment.setting].push_back(
            {static_cast<double>(p.associate_breaches) / p.agreements, p.cooperations, p.rounds});
      }
      std::vector<csv::Row> bins, terms, curve;
      std::vector<std::string> notes;
      for (const auto& [setting, exposures] : by_setting) {
        for (const auto& b : bin_breach_frequencies(exposures, options.breach_bins)) {
          bins.push_back({setting, fmt(b.midpoint), fmt(b.successes), fmt(b.trials)});
        }
        const int degree = setting.rfind("uninformed", 0) == 0 ? options.breach_degree_uninformed
                                                                : options.breach_degree_informed;
        try {
          const auto fit = fit_breach_glm(exposures, degree, options.breach_bins);
          for (const auto& t : fit.terms) {
            terms.push_back({setting, t.name, fmt(t.estimate), fmt(t.std_error), fmt(t.z), fmt(t.p_value)});
          }
          terms.push_back({setting, "null_deviance", fmt(fit.null_deviance), "", "", ""});
          terms.push_back({setting, "residual_deviance", fmt(fit.residual_deviance), "", "", ""});
          terms.push_back({setting, "aic", fmt(fit.aic), "", "", ""});
          for (const auto& pt : breach_response_curve(fit, options.curve_points)) {
            curve.push_back({setting, fmt(pt.x), fmt(pt.p)});
          }
        } catch (const Error& e) {
          notes.push_back(setting + ": " + std::string(to_string(e.code())));
        }
      }
      if (bins.empty()) {
        s.reason = "no human-agent interaction with an agreement";
      } else {
        s.files.push_back(w.write("breach_bins.csv", {"setting", "midpoint", "cooperations", "rounds"}, bins));
        s.files.push_back(
            w.write("breach_glm.csv", {"setting", "term", "estimate", "std_error", "z", "p_value"}, terms));
        s.files.push_back(w.write("breach_curve.csv", {"setting", "breach_frequency", "cooperation"}, curve));
        s.available = true;
        for (const auto& n : notes) s.reason += (s.reason.empty() ? "fit failed for " : "; ") + n;
      }
    }
  }

  // Questionnaire summaries: norm estimates, traits, 7C items.
  auto likert_section = [&](const std::string& name, const std::string& file, const std::vector<std::string>& items,
                            auto get) {
    auto& s = section(name);
    std::vector<csv::Row> rows;
    std::map<Treatment, std::map<std::string, std::vector<double>>> values;
    for (const auto& [t, ps] : groups) {
      for (const auto* p : ps) {
        if (!p->questionnaire) continue;
        for (const auto& item : items) values[t][item].push_back(get(*p, item));
      }
    }
    for (const auto& [t, m] : values) {
      for (const auto& item : items) {
        const auto& xs = m.at(item);
        rows.push_back({t.name(), item, std::to_string(xs.size()), fmt(median(xs)), fmt(mean(xs)), fmt(sd(xs))});
      }
    }
    if (rows.empty()) {
      s.reason = "no questionnaires";
      return;
    }
    s.available = true;
    s.files.push_back(w.write(file, {"treatment", "item", "n", "median", "mean", "sd"}, rows));
    for_each_pair(values, [&](const std::string& setting, const auto& a, const auto& b) {
      for (const auto& item : items) {
        tests.add(name, setting, item, a.first.name(), b.first.name(),
                  [&] { return mann_whitney_u(a.second.at(item), b.second.at(item)); });
      }
    });
  };

  // Realized rate for a participant: cooperation of the other humans in the same treatment.
  std::map<Treatment, std::pair<long, long>> treatment_totals;
  for (const auto& [k, p] : participants) {
    treatment_totals[p.treatment].first += p.cooperations;
    treatment_totals[p.treatment].second += p.rounds;
  }
  likert_section("norm_estimates", "norm_estimates.csv", {"norm_midpoint"},
                 [](const Participant& p, const std::string&) { return p.questionnaire->norm_midpoint(); });
  if (auto& s = manifest.sections.back(); s.available) {
    std::vector<csv::Row> rows;
    for (const auto& [t, tot] : treatment_totals) {
      rows.push_back({t.name(), fmt(static_cast<double>(tot.first) / tot.second)});
    }
    s.files.push_back(w.write("realized_cooperation.csv", {"treatment", "cooperation_rate"}, rows));
  }
  likert_section("traits", "traits.csv", kTraitColumns,
                 [](const Participant& p, const std::string& item) { return p.questionnaire->traits.at(item); });
  likert_section("seven_c", "seven_c.csv", kSevenCColumns,
                 [](const Participant& p, const std::string& item) { return p.questionnaire->seven_c.at(item); });

  // Perception GLMs.
  {
    auto& s = section("glm_questionnaire");
    std::map<std::string, std::vector<ParticipantPerception>> by_setting;
    for (const auto& [k, p] : participants) {
      if (!p.questionnaire) continue;
      ParticipantPerception row{p.treatment.pairing, p.cooperations, p.rounds, {}};
      for (const auto& [item, v] : p.questionnaire->traits) row.predictors[item] = v;
      for (const auto& [item, v] : p.questionnaire->seven_c) row.predictors[item] = v;
      row.predictors[std::string(kNormPredictor)] = p.questionnaire->norm_midpoint();
      by_setting[p.treatment.setting].push_back(std::move(row));
    }
    std::vector<csv::Row> rows;
    std::vector<std::string> notes;
    for (const auto& [setting, ps] : by_setting) {
      for (auto [scope, label] : {std::pair{GlmScope::HumanHuman, "HH"}, std::pair{GlmScope::PooledAgents, "agents"}}) {
        try {
          const auto fit = questionnaire_glm(ps, scope);
          for (const auto& t : fit.terms) {
            rows.push_back({setting, label, t.name, fmt(t.estimate), fmt(t.std_error), fmt(t.z), fmt(t.p_value)});
          }
          rows.push_back({setting, label, "residual_deviance", fmt(fit.residual_deviance), "", "", ""});
          rows.push_back({setting, label, "aic", fmt(fit.aic), "", "", ""});
        } catch (const Error& e) {
          notes.push_back(setting + "/" + label + ": " + std::string(to_string(e.code())));
        }
      }
    }
    if (rows.empty()) {
      s.reason = by_setting.empty() ? "no questionnaires" : "no model could be fitted";
    } else {
      s.available = true;
      s.files.push_back(
          w.write("glm_questionnaire.csv", {"setting", "scope", "term", "estimate", "std_error", "z", "p_value"}, rows));
    }
    for (const auto& n : notes) s.reason += (s.reason.empty() ? "" : "; ") + n;
  }

  // Motive ratings of promise-breaking, one-sample Wilcoxon against 0.
  {
    auto& s = section("motives");
    if (!d.annotations || d.annotations->motives.empty()) {
      s.reason = "no motive ratings";
    } else {
      std::map<std::string, Treatment> treatment_of_id;
      for (const auto& r : d.interactions) treatment_of_id.emplace(r.interaction_id(), treatment_of(r));
      std::map<Treatment, std::vector<MotiveRating>> grouped;
      std::size_t unmatched = 0;
      for (const auto& m : d.annotations->motives) {
        auto it = treatment_of_id.find(m.interaction_id);
        if (it == treatment_of_id.end()) {
          ++unmatched;
          continue;
        }
        grouped[it->second].push_back(m);
      }
      std::vector<csv::Row> rows;
      for (const auto& [t, ms] : grouped) {
        int coherent = 0, error_free = 0;
        for (const auto& m : ms) {
          coherent += m.coherent;
          error_free += m.error_free;
        }
        for (const char* motive : kMotives) {
          std::vector<double> xs;
          for (const auto& m : ms) xs.push_back(m.scores.at(motive));
          rows.push_back({t.name(), motive, std::to_string(xs.size()), fmt(mean(xs)), fmt(median(xs))});
          tests.add("motives", t.setting, motive, t.name(), "0", [&] {
            auto r = wilcoxon_signed_rank(xs);
            r.test = std::string("wilcoxon:") + motive;
            return r;
          });
        }
        rows.push_back({t.name(), "coherent", std::to_string(ms.size()),
                        fmt(static_cast<double>(coherent) / static_cast<double>(ms.size())), ""});
        rows.push_back({t.name(), "error_free", std::to_string(ms.size()),
                        fmt(static_cast<double>(error_free) / static_cast<double>(ms.size())), ""});
      }
      if (rows.empty()) {
        s.reason = "motive ratings match no interaction";
      } else {
        s.available = true;
        s.files.push_back(w.write("motives.csv", {"treatment", "item", "n", "mean", "median"}, rows));
        if (unmatched) s.reason = std::to_string(unmatched) + " ratings match no interaction";
      }
    }
  }

  // Humanness judgements where the associate's nature was withheld.
  {
    auto& s = section("humanness");
    std::map<Treatment, std::vector<double>> values;
    for (const auto& [t, ps] : groups) {
      for (const auto* p : ps) {
        if (p->questionnaire && p->questionnaire->humanness) values[t].push_back(*p->questionnaire->humanness);
      }
    }
    if (values.empty()) {
      s.reason = "no humanness ratings";
    } else {
      std::vector<csv::Row> rows;
      for (const auto& [t, xs] : values) {
        rows.push_back({t.name(), std::to_string(xs.size()), fmt(median(xs)), fmt(mean(xs)), fmt(sd(xs))});
        tests.add("humanness", t.setting, "humanness", t.name(), "0", [&] { return wilcoxon_signed_rank(xs); });
      }
      for_each_pair(values, [&](const std::string& setting, const auto& a, const auto& b) {
        tests.add("humanness", setting, "humanness", a.first.name(), b.first.name(),
                  [&] { return mann_whitney_u(a.second, b.second); });
      });
      s.available = true;
      s.files.push_back(w.write("humanness.csv", {"treatment", "n", "median", "mean", "sd"}, rows));
    }
  }

  // Perceived intelligence against the associate's breach frequency.
  {
    auto& s = section("spearman");
    if (!resolved) {
      s.reason = "no annotations";
    } else {
      std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_setting;
      for (const auto& [k, p] : participants) {
        if (p.treatment.pairing == "HH" || p.agreements == 0 || !p.questionnaire) continue;
        auto& [x, y] = by_setting[p.treatment.setting];
        x.push_back(p.questionnaire->traits.at("intelligence"));
        y.push_back(static_cast<double>(p.associate_breaches) / p.agreements);
      }
      std::vector<csv::Row> rows;
      for (const auto& [setting, xy] : by_setting) {
        try {
          const auto r = spearman(xy.first, xy.second);
          rows.push_back({setting, std::to_string(xy.first.size()), fmt(r.statistic), fmt(r.p_value), ""});
        } catch (const Error& e) {
          rows.push_back({setting, std::to_string(xy.first.size()), "", "", std::string(to_string(e.code()))});
        }
      }
      if (rows.empty()) {
        s.reason = "no human-agent participant with an agreement and a questionnaire";
      } else {
        s.available = true;
        s.files.push_back(w.write("spearman.csv", {"setting", "n", "rho", "p_value", "error"}, rows));
      }
    }
  }

  {
    auto& s = section("tests");
    s.available = true;
    s.files.push_back(w.write("tests.csv", kTestHeader, tests.rows));
  }

  nlohmann::ordered_json j;
  j["excluded_interactions"] = manifest.excluded_interactions;
  j["participants"] = participants.size();
  j["interactions"] = d.interactions.size();
  auto& secs = j["sections"] = nlohmann::ordered_json::array();
  for (const auto& s : manifest.sections) {
    secs.push_back({{"name", s.name},
                    {"status", s.available ? "available" : "unavailable"},
                    {"reason", s.reason},
                    {"files", s.files}});
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write manifest.json");
  out << j.dump(2) << '\n';
  return manifest;
}

}  // namespace pdlab::stats
