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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdlab/game/choice.hpp"
#include "pdlab/stats/tests.hpp"

namespace pdlab::stats {

// One row of interactions.csv: a human participant's view of one round.
struct InteractionRow {
  std::string session_id;
  std::string pairing;   // HH, HF, HC, HS
  std::string labeling;  // informed, uninformed
  bool communication = true;
  int round = 0;
  std::string participant_id;
  std::string associate_id;
  std::string associate_kind;  // human or a persona name
  std::string own_msg1, associate_msg1, own_msg2, associate_msg2;
  game::Choice own_choice = game::Choice::A;
  game::Choice associate_choice = game::Choice::A;
  int own_payoff = 0;
  int associate_payoff = 0;
  bool own_fallback = false;
  bool associate_fallback = false;

  bool with_agent() const { return associate_kind != "human"; }
  // "<session>/<round>/<p1>/<p2>"; p1 is the human facing an agent, or the
  // smaller id of two humans.
  std::string interaction_id() const;
  // Whether this row's participant is p1 of the interaction.
  bool is_p1() const;
  // "HF/informed", with "/silent" appended without communication.
  std::string treatment() const;
};

struct QuestionnaireRow {
  std::string session_id;
  std::string pairing;
  std::string labeling;
  std::string participant_id;
  int norm_lo = 0;
  int norm_hi = 0;
  std::map<std::string, int> traits;
  std::map<std::string, int> seven_c;
  std::optional<int> humanness;
  int llm_familiarity = 0;
  std::string svo;
  int age = 0;
  std::string gender;
  std::string field;

  double norm_midpoint() const { return (norm_lo + norm_hi) / 200.0; }
};

// Trait and 7C item names, in questionnaire column order.
extern const std::vector<std::string> kTraitColumns;
extern const std::vector<std::string> kSevenCColumns;

struct AnnotationRecord {
  std::string interaction_id;
  std::string annotator_id;
  std::optional<game::Choice> p1_preferred;
  std::optional<game::Choice> p2_preferred;
  std::optional<game::Choice> p1_desires_from_p2;
  std::optional<game::Choice> p2_desires_from_p1;
  bool agreement_reached = false;
  bool resolved_by_third = false;
};

inline constexpr const char* kMotives[] = {"risk_aversion", "inequality_aversion", "strategic_defection",
                                           "unconditional_defection"};

struct MotiveRating {
  std::string interaction_id;
  std::string annotator_id;
  std::map<std::string, int> scores;  // each of kMotives, in [-3, 3]
  bool coherent = false;
  bool error_free = false;
};

struct AnnotationSet {
  std::vector<AnnotationRecord> records;
  std::vector<MotiveRating> motives;
};

// Columns: interaction_id, annotator_id, resolver (0/1), agreement (0/1),
// p1_preferred, p2_preferred, p1_desires_from_p2, p2_desires_from_p1
// (A, B or empty), then the four motive scores and coherent, error_free.
// Motive cells are either all empty or all filled. Throws Error{SchemaError}.
AnnotationSet read_annotations(const std::filesystem::path& path);
void write_annotations(const std::filesystem::path& path, const AnnotationSet& set);
const std::vector<std::string>& annotation_columns();

struct ResolvedAgreements {
  std::map<std::string, bool> agreement;  // by interaction id
  std::vector<std::string> excluded;      // disagreement without a resolver
};

// Two annotators who agree settle the interaction; on disagreement the
// resolver's verdict is used, and without one the interaction is excluded.
// A single annotator settles it alone.
ResolvedAgreements resolve_agreements(const std::vector<AnnotationRecord>& records);

// One-sample Wilcoxon signed-rank of each motive's scores against 0; every
// annotator's rating counts as an observation. Throws
// Error{InsufficientData} without ratings and propagates
// Error{AllZeroDifferences}.
std::vector<std::pair<std::string, TestResult>> motive_summary(const std::vector<MotiveRating>& ratings,
                                                               Alternative alt = Alternative::TwoSided);

struct Dataset {
  std::vector<InteractionRow> interactions;
  std::vector<QuestionnaireRow> questionnaires;
  std::optional<AnnotationSet> annotations;
};

// Reads interactions.csv and questionnaire.csv from an export directory,
// plus annotations.csv when present. Throws Error{IoError} or Error{SchemaError}.
Dataset load_dataset(const std::filesystem::path& dir);
// Appends another export's rows.
void merge(Dataset& into, Dataset other);
// Writes the three tables in the same layout load_dataset reads.
void save_dataset(const Dataset& d, const std::filesystem::path& dir);

// Throws Error{DatasetIncomplete}: no interactions, a participant with a
// round count different from the rest of the session, a repeated
// (participant, round), or a questionnaire for someone who never played.
void check_complete(const Dataset& d);

}  // namespace pdlab::stats
