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

#include <cstdint>
#include <string>
#include <string_view>

#include "pdlab/agent/backend.hpp"
#include "pdlab/agent/persona.hpp"

namespace pdlab::agent {

enum class Phase { Message, Decision };

struct MockPolicyConfig {
  // Probability that a selfish agent decides B.
  double selfish_defect_probability = 1.0;
  // Baseline chance that a fair agent perceives elevated risk without having
  // been exploited; 0 leaves exploitation as the only trigger.
  double fair_risk_probability = 0.1;
};

struct MockContext {
  int round_index = 1;
  int message_slot = 1;
  // The agent chose A and its associate chose B in the previous round.
  bool exploited_last_round = false;
  // Uniform draw in [0, 1) supplied by the caller.
  double draw = 0.0;
};

// Deterministic scripted completion text for an offline agent. Every persona
// proposes mutual A in its messages; decisions follow the persona script.
// The output always parses with extract_bracketed_message or extract_decision.
std::string mock_policy_step(PersonaKind persona, Phase phase, const MockContext& context,
                             const MockPolicyConfig& config = {});

// A backend that reads the rendered prompt (persona name, phase, last
// history line) and answers with mock_policy_step. The draw is a hash of
// (seed, caller_id, system prompt, prompt), so output does not depend on
// call order.
class MockBackend : public Backend {
 public:
  explicit MockBackend(std::uint64_t seed, MockPolicyConfig config = {}, std::string id = "mock");

  std::string id() const override { return id_; }
  std::string send(const CompletionRequest& request) override;

  static MockContext context_from_prompt(std::string_view prompt);

 private:
  std::uint64_t seed_;
  MockPolicyConfig config_;
  std::string id_;
};

}  // namespace pdlab::agent
