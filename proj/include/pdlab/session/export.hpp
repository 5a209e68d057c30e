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

#include "pdlab/session/session.hpp"

namespace pdlab::session {

const std::vector<std::string>& interaction_columns();
const std::vector<std::string>& questionnaire_columns();
const std::vector<std::string>& payout_columns();

struct DatasetFiles {
  std::filesystem::path interactions;
  std::filesystem::path questionnaire;
  std::filesystem::path payouts;
};

// Writes interactions.csv (one row per human participant per round),
// questionnaire.csv and payouts.csv into dir. Output depends only on the
// sessions, in the given order. Throws Error{SessionIncomplete} before
// writing anything if a session is not complete.
DatasetFiles export_dataset(const std::vector<SessionResult>& sessions, const std::filesystem::path& dir);

}  // namespace pdlab::session
