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

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdlab/error.hpp"
#include "pdlab/stats/report.hpp"

using namespace pdlab;
using nlohmann::ordered_json;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Errc::InvalidArgument, "not a number: '" + item + "'");
    }
  }
  return out;
}

// "1,2,3;4,5;6,7,8"
std::vector<std::vector<double>> parse_groups(const std::string& text) {
  std::vector<std::vector<double>> out;
  std::stringstream ss(text);
  std::string group;
  while (std::getline(ss, group, ';')) out.push_back(parse_list(group));
  return out;
}

ordered_json to_json(const stats::TestResult& r) {
  ordered_json j = {{"test", r.test}, {"statistic_name", r.statistic_name}, {"statistic", r.statistic},
                    {"p_value", r.p_value}, {"exact", r.exact}};
  if (r.effect_size) j["effect_size"] = *r.effect_size;
  if (r.df) j["df"] = *r.df;
  if (r.df2) j["df2"] = *r.df2;
  return j;
}

stats::Alternative parse_alternative(const std::string& s) {
  if (s == "two-sided") return stats::Alternative::TwoSided;
  if (s == "greater") return stats::Alternative::Greater;
  if (s == "less") return stats::Alternative::Less;
  throw Error(Errc::InvalidArgument, "alternative must be two-sided, greater or less");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dataset ingestion, statistical tests and report emission"};
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "Merge session exports and annotations into one dataset");
  std::vector<std::string> exports;
  std::string annotations, ingest_out;
  ingest->add_option("--export", exports, "Export directory (repeatable)")->required()->check(CLI::ExistingDirectory);
  ingest->add_option("--annotations", annotations, "Annotation CSV")->check(CLI::ExistingFile);
  ingest->add_option("--out", ingest_out, "Dataset directory")->required();

  auto* st = app.add_subcommand("stats", "Run one test on inline data and print JSON");
  std::string test, x_text, y_text, groups_text, counts_text, alternative = "two-sided";
  double mu = 0;
  bool no_continuity = false;
  st->add_option("--test", test)
      ->required()
      ->check(CLI::IsMember({"mwu", "wilcoxon", "proportions", "anova", "tukey", "spearman", "cohen_d", "cohen_h"}));
  st->add_option("--x", x_text, "Comma-separated sample");
  st->add_option("--y", y_text, "Comma-separated sample");
  st->add_option("--groups", groups_text, "Samples separated by ';'");
  st->add_option("--counts", counts_text, "k1,n1,k2,n2 for proportions; p1,p2 for cohen_h");
  st->add_option("--mu", mu, "Location for wilcoxon");
  st->add_option("--alternative", alternative, "two-sided, greater or less");
  st->add_flag("--no-continuity", no_continuity, "Uncorrected proportions test");

  auto* rep = app.add_subcommand("report", "Emit the report bundle for a dataset");
  std::string dataset, report_out;
  stats::ReportOptions ropts;
  rep->add_option("--dataset", dataset)->required()->check(CLI::ExistingDirectory);
  rep->add_option("--out", report_out)->required();
  rep->add_option("--bins", ropts.breach_bins, "Breach-frequency bins")->check(CLI::Range(2, 1000));
  rep->add_option("--degree-informed", ropts.breach_degree_informed)->check(CLI::Range(1, 8));
  rep->add_option("--degree-uninformed", ropts.breach_degree_uninformed)->check(CLI::Range(1, 8));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      stats::Dataset d;
      for (const auto& e : exports) stats::merge(d, stats::load_dataset(e));
      if (!annotations.empty()) {
        auto extra = stats::read_annotations(annotations);
        stats::Dataset a;
        a.annotations = std::move(extra);
        stats::merge(d, std::move(a));
      }
      stats::check_complete(d);
      stats::save_dataset(d, ingest_out);
      ordered_json j = {{"interactions", d.interactions.size()}, {"questionnaires", d.questionnaires.size()}};
      if (d.annotations) {
        const auto res = stats::resolve_agreements(d.annotations->records);
        j["annotations"] = d.annotations->records.size();
        j["motive_ratings"] = d.annotations->motives.size();
        j["resolved_interactions"] = res.agreement.size();
        j["excluded_interactions"] = res.excluded;
      }
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (*st) {
      const auto x = parse_list(x_text);
      const auto y = parse_list(y_text);
      const auto alt = parse_alternative(alternative);
      ordered_json out;
      if (test == "mwu") {
        out = to_json(stats::mann_whitney_u(x, y, alt));
      } else if (test == "wilcoxon") {
        out = to_json(stats::wilcoxon_signed_rank(x, mu, alt));
      } else if (test == "proportions") {
        const auto c = parse_list(counts_text);
        if (c.size() != 4) throw Error(Errc::InvalidArgument, "--counts needs k1,n1,k2,n2");
        out = to_json(stats::proportions_ztest(static_cast<long>(c[0]), static_cast<long>(c[1]),
                                               static_cast<long>(c[2]), static_cast<long>(c[3]), !no_continuity));
      } else if (test == "anova") {
        const auto t = stats::anova_table(parse_groups(groups_text));
        out = {{"test", "one_way_anova"}, {"statistic_name", "F"}, {"statistic", t.f}, {"p_value", t.p_value},
               {"df", t.df_between}, {"df2", t.df_within}, {"ss_between", t.ss_between}, {"ss_within", t.ss_within}};
      } else if (test == "tukey") {
        out = ordered_json::array();
        for (const auto& r : stats::tukey_hsd(parse_groups(groups_text))) {
          out.push_back({{"first", r.first}, {"second", r.second}, {"difference", r.difference}, {"lower", r.lower},
                         {"upper", r.upper}, {"p_adjusted", r.p_adjusted}});
        }
      } else if (test == "spearman") {
        out = to_json(stats::spearman(x, y));
      } else if (test == "cohen_d") {
        out = {{"test", "cohen_d"}, {"effect_size", stats::cohen_d(x, y)}};
      } else {
        const auto c = parse_list(counts_text);
        if (c.size() != 2) throw Error(Errc::InvalidArgument, "--counts needs p1,p2");
        out = {{"test", "cohen_h"}, {"effect_size", stats::cohen_h(c[0], c[1])}};
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    const auto m = stats::emit_report(stats::load_dataset(dataset), report_out, ropts);
    for (const auto& s : m.sections) {
      std::cout << (s.available ? "available   " : "unavailable ") << s.name;
      if (!s.reason.empty()) std::cout << " (" << s.reason << ")";
      std::cout << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "analyze: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
