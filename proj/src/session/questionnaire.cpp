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

#include "pdlab/session/questionnaire.hpp"

#include <algorithm>

#include "pdlab/error.hpp"

namespace pdlab::session {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(Errc::SchemaError, what); }

void check_likerts(const std::map<std::string, int>& got, const std::array<std::string_view, 7>& items,
                   const std::string& section) {
  if (got.size() != items.size()) schema(section + " must rate exactly " + std::to_string(items.size()) + " items");
  for (auto item : items) {
    const auto it = got.find(std::string(item));
    if (it == got.end()) schema(section + " is missing '" + std::string(item) + "'");
    if (it->second < -3 || it->second > 3) schema(section + "." + std::string(item) + " outside [-3, 3]");
  }
}

template <class T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    schema(std::string("bad or missing '") + key + "'");
  }
}

}  // namespace

void validate(const QuestionnaireResponse& r, Labeling labeling, const std::vector<NormBin>& bins) {
  if (std::find(bins.begin(), bins.end(), r.norm_estimate) == bins.end()) {
    schema("norm_estimate is not one of the configured intervals");
  }
  check_likerts(r.trait_likerts, kTraitItems, "traits");
  check_likerts(r.seven_c_likerts, kSevenCItems, "seven_c");
  if (labeling == Labeling::Uninformed) {
    if (!r.humanness) schema("humanness is required when associates are not identified");
    if (*r.humanness < -3 || *r.humanness > 3) schema("humanness outside [-3, 3]");
  } else if (r.humanness) {
    schema("humanness is only asked when associates are not identified");
  }
  if (r.llm_familiarity < 1 || r.llm_familiarity > 5) schema("llm_familiarity outside 1..5");
  if (r.demographics.age <= 0) schema("demographics.age must be positive");
}

QuestionnaireResponse parse_response(const json& j, const std::vector<NormBin>& bins) {
  if (!j.is_object()) schema("questionnaire answers must be an object");
  QuestionnaireResponse r;
  const auto norm = field<std::vector<int>>(j, "norm_estimate");
  if (norm.size() != 2) schema("norm_estimate must be [lo, hi]");
  const auto bin = std::find_if(bins.begin(), bins.end(),
                                [&](const NormBin& b) { return b.lo == norm[0] && b.hi == norm[1]; });
  if (bin == bins.end()) schema("norm_estimate is not one of the configured intervals");
  r.norm_estimate = *bin;
  r.trait_likerts = field<std::map<std::string, int>>(j, "traits");
  r.seven_c_likerts = field<std::map<std::string, int>>(j, "seven_c");
  if (j.contains("humanness") && !j["humanness"].is_null()) r.humanness = field<int>(j, "humanness");
  r.llm_familiarity = field<int>(j, "llm_familiarity");
  r.svo_items = field<std::vector<int>>(j, "svo");
  const auto& d = j.contains("demographics") ? j["demographics"] : json();
  if (!d.is_object()) schema("bad or missing 'demographics'");
  r.demographics.age = field<int>(d, "age");
  r.demographics.gender = field<std::string>(d, "gender");
  r.demographics.field = field<std::string>(d, "field");
  return r;
}

json to_json(const QuestionnaireResponse& r) {
  json j = {
      {"norm_estimate", {r.norm_estimate.lo, r.norm_estimate.hi}},
      {"traits", r.trait_likerts},
      {"seven_c", r.seven_c_likerts},
      {"llm_familiarity", r.llm_familiarity},
      {"svo", r.svo_items},
      {"demographics",
       {{"age", r.demographics.age}, {"gender", r.demographics.gender}, {"field", r.demographics.field}}},
  };
  if (r.humanness) j["humanness"] = *r.humanness;
  return j;
}

json questionnaire_page(std::string_view page, const SessionConfig& config) {
  json j = {{"id", page}};
  const auto likert = [](const auto& items) {
    json out = json::array();
    for (auto i : items) out.push_back({{"id", i}, {"min", -3}, {"max", 3}});
    return out;
  };
  if (page == "norm") {
    json bins = json::array();
    for (const auto& b : config.norm_bins) bins.push_back({b.lo, b.hi});
    j["intervals"] = bins;
    j["bonus"] = config.norm_bonus.to_string();
  } else if (page == "traits") {
    j["items"] = likert(kTraitItems);
  } else if (page == "seven_c") {
    j["items"] = likert(kSevenCItems);
  } else if (page == "humanness") {
    j["items"] = likert(std::array<std::string_view, 1>{"humanness"});
  } else if (page == "llm_familiarity") {
    j["items"] = json::array({{{"id", "llm_familiarity"}, {"min", 1}, {"max", 5}}});
  } else if (page == "svo") {
    j["items"] = json::array({{{"id", "svo"}, {"kind", "slider_list"}}});
  } else if (page == "demographics") {
    j["items"] = json::array({"age", "gender", "field"});
  }
  return j;
}

bool grade_norm_estimate(const NormBin& estimate, double realized_rate) {
  // Compare as fractions so 0.2 meets the 20% boundary exactly.
  const double lo = estimate.lo / 100.0;
  const double hi = estimate.hi / 100.0;
  if (realized_rate < lo) return false;
  return estimate.closed ? realized_rate <= hi : realized_rate < hi;
}

Money compute_payout(long total_points, int correct_norm_guesses, const SessionConfig& config) {
  if (total_points < 0 || correct_norm_guesses < 0) throw Error(Errc::InvalidArgument, "negative payout input");
  // Work in millionths so the rate is exact, then round half up to cents.
  const std::int64_t micros = config.show_up_fee.cents * 10'000 +
                              config.exchange_rate_micros * static_cast<std::int64_t>(total_points) +
                              config.norm_bonus.cents * 10'000 * correct_norm_guesses;
  return Money{(micros + 5'000) / 10'000};
}

}  // namespace pdlab::session
