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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdlab::stats {

// Predictor columns, one value per observation.
struct Design {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  void add(std::string name, std::vector<double> column);
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

struct GlmOptions {
  bool intercept = true;
  int max_iterations = 100;
  // Converged once no coefficient moves by this much.
  double tolerance = 1e-10;
};

struct GlmTerm {
  std::string name;
  double estimate = 0;
  double std_error = 0;
  double z = 0;
  double p_value = 1;
};

inline constexpr std::string_view kInterceptName = "(Intercept)";

// Binomial family, logit link.
struct GlmFit {
  std::vector<GlmTerm> terms;  // intercept first when fitted
  double null_deviance = 0;
  double residual_deviance = 0;
  double aic = 0;
  double df_null = 0;
  double df_residual = 0;
  int iterations = 0;
  int observations = 0;
  // Deviance after each iteration; never increases beyond rounding noise.
  std::vector<double> deviance_trace;

  const GlmTerm* term(std::string_view name) const;
};

// Iteratively reweighted least squares with step halving. Rows with zero
// trials are skipped. Standard errors come from the inverse Fisher
// information. Throws Error{SizeMismatch}, Error{InvalidArgument} (counts
// outside 0 <= successes <= trials), Error{RankDeficientDesign},
// Error{SeparationDetected} when the fit runs off to infinity.
GlmFit fit_binomial_glm(const Design& design, std::span<const double> successes, std::span<const double> trials,
                        const GlmOptions& options = {});

double inverse_logit(double eta);
// Fitted probability for one observation given in design column order.
double predict(const GlmFit& fit, std::span<const double> row);

// z-scores with the n - 1 standard deviation. Throws Error{ZeroVariance}.
std::vector<double> standardize(std::span<const double> column);

struct CurvePoint {
  double x = 0;
  double p = 0;
};

// inverse_logit(c0 + c1 x + c2 x^2 + ...) on `points` evenly spaced x in [0, 1].
std::vector<CurvePoint> polynomial_curve(std::span<const double> coefficients, int points = 1001);
// Uses the fit's intercept and its "breach", "breach^2", ... terms.
std::vector<CurvePoint> breach_response_curve(const GlmFit& fit, int points = 1001);
// Grid x values strictly inside (0, 1) where the curve stops rising and starts falling.
std::vector<double> interior_maxima(const std::vector<CurvePoint>& curve);

// One human's exposure: how often the associates broke an agreement and
// how often the human chose A.
struct BreachExposure {
  double breach_frequency = 0;  // in [0, 1]
  int cooperations = 0;
  int rounds = 0;
};

struct BreachBin {
  double midpoint = 0;
  double successes = 0;
  double trials = 0;
};

// Equal-width bins on [0, 1] (the last closed); empty bins are dropped.
std::vector<BreachBin> bin_breach_frequencies(std::span<const BreachExposure> exposures, int bins = 10);
// Cooperation counts per bin regressed on polynomial terms of the bin midpoint.
GlmFit fit_breach_glm(std::span<const BreachExposure> exposures, int degree = 3, int bins = 10);

// Perception items used as predictors alongside the normative expectation.
inline constexpr std::string_view kPerceptionPredictors[] = {
    "clarity",         "conciseness",  "concreteness",    "coherence",  "courteousness",
    "correctness",     "completeness", "trustworthiness", "intelligence", "cooperativeness",
    "likability",      "fairness",     "agency",          "experience"};
inline constexpr std::string_view kNormPredictor = "normative_expectation";

struct ParticipantPerception {
  std::string pairing;  // HH, HF, HC, HS
  int cooperations = 0;
  int rounds = 0;
  std::map<std::string, double> predictors;
};

enum class GlmScope { HumanHuman, PooledAgents };

// Standardized perception predictors plus the normative expectation; the
// pooled model adds treatment_HC and treatment_HS dummies against HF.
// Throws Error{SchemaError} for a missing predictor, Error{InsufficientData}
// without rows in scope, and whatever fit_binomial_glm throws.
GlmFit questionnaire_glm(const std::vector<ParticipantPerception>& rows, GlmScope scope);

}  // namespace pdlab::stats
