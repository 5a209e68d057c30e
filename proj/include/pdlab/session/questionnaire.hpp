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

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pdlab/session/config.hpp"

namespace pdlab::session {

inline constexpr std::array<std::string_view, 7> kTraitItems = {
    "trustworthiness", "intelligence", "cooperativeness", "likability", "fairness", "agency", "experience"};
inline constexpr std::array<std::string_view, 7> kSevenCItems = {
    "clarity", "conciseness", "concreteness", "coherence", "courteousness", "correctness", "completeness"};

struct Demographics {
  int age = 0;
  std::string gender;
  std::string field;
  bool operator==(const Demographics&) const = default;
};

struct QuestionnaireResponse {
  std::string participant_id;
  NormBin norm_estimate;
  std::map<std::string, int> trait_likerts;
  std::map<std::string, int> seven_c_likerts;
  std::optional<int> humanness;
  int llm_familiarity = 1;  // 1..5
  std::vector<int> svo_items;  // raw slider positions, stored as given
  Demographics demographics;
  bool operator==(const QuestionnaireResponse&) const = default;
};

// Throws Error{SchemaError}: Likerts outside [-3, 3] or missing, humanness
// present unless labeling is Uninformed (and required then), norm estimate
// not one of bins, familiarity outside 1..5.
void validate(const QuestionnaireResponse& r, Labeling labeling, const std::vector<NormBin>& bins);

// Wire form: {"norm_estimate": [lo, hi], "traits": {...}, "seven_c": {...},
// "humanness": n, "llm_familiarity": n, "svo": [...], "demographics": {...}}.
// Throws Error{SchemaError} on shape errors. The participant id is not part
// of the wire form.
QuestionnaireResponse parse_response(const nlohmann::json& j, const std::vector<NormBin>& bins);
nlohmann::json to_json(const QuestionnaireResponse& r);

// Items of one questionnaire page for the client.
nlohmann::json questionnaire_page(std::string_view page, const SessionConfig& config);

// realized_rate in [0, 1] lies in [lo, hi), or [lo, hi] for the closed bin.
bool grade_norm_estimate(const NormBin& estimate, double realized_rate);

// show-up fee + rate * points + bonus * correct guesses, rounded half up to
// a hundredth. Throws Error{InvalidArgument} for negative inputs.
Money compute_payout(long total_points, int correct_norm_guesses, const SessionConfig& config);

}  // namespace pdlab::session
