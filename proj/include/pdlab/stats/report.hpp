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
#include <string>
#include <vector>

#include "pdlab/stats/dataset.hpp"

namespace pdlab::stats {

struct ReportOptions {
  int breach_bins = 10;
  // Polynomial degree of the breach-frequency model per labeling.
  int breach_degree_informed = 3;
  int breach_degree_uninformed = 4;
  int curve_points = 101;
};

struct SectionStatus {
  std::string name;
  bool available = false;
  std::string reason;  // why it is unavailable, or notes on partial fits
  std::vector<std::string> files;
};

struct ReportManifest {
  std::vector<SectionStatus> sections;
  std::size_t excluded_interactions = 0;  // annotator disagreement without a resolver

  const SectionStatus* section(const std::string& name) const;
};

// Section names in manifest order.
const std::vector<std::string>& report_sections();

// Writes one CSV per table plus tests.csv and manifest.json into dir.
// Treatments are compared pairwise within each labeling (and communication)
// setting. Output is a function of the dataset alone. Throws
// Error{DatasetIncomplete} via check_complete.
ReportManifest emit_report(const Dataset& dataset, const std::filesystem::path& dir, const ReportOptions& options = {});

// Per-(treatment side) agreement and breach counts; breach rate is
// breaches / agreements.
struct AgreementBreachRow {
  std::string treatment;
  std::string side;  // human or associate
  long interactions = 0;
  long agreements = 0;
  long breaches = 0;
};
std::vector<AgreementBreachRow> agreement_breach_counts(const Dataset& dataset, const ResolvedAgreements& resolved);

}  // namespace pdlab::stats
