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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdlab/game/choice.hpp"

namespace pdlab::stats {

enum class Alternative { TwoSided, Greater, Less };

struct TestResult {
  std::string test;
  std::string statistic_name;  // W, chi2, V, F, rho
  double statistic = 0.0;
  double p_value = 1.0;
  std::optional<double> effect_size;  // Cohen's d or h where it applies
  std::optional<double> df;
  std::optional<double> df2;
  bool exact = false;
};

// A promise was breached: an agreement was reached and B was chosen.
constexpr bool derive_breach(bool agreement, game::Choice choice) { return agreement && choice == game::Choice::B; }

// Midranks (1-based) of the values.
std::vector<double> midranks(std::span<const double> values);

// W is the rank sum of x minus |x|(|x|+1)/2. The p value is exact (by
// enumerating rank sums, midranks included) when |x| + |y| <= 16, else from
// the normal approximation with tie-corrected variance and continuity
// correction. Samples with one common value give p = 1. Throws
// Error{InsufficientData} on an empty sample.
TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y,
                          Alternative alt = Alternative::TwoSided);
inline constexpr int kMannWhitneyExactLimit = 16;

// V is the sum of ranks of positive differences x - mu after dropping
// zeros. Exact for up to 15 nonzero differences, otherwise tie-corrected
// normal approximation with continuity correction. Throws
// Error{AllZeroDifferences}.
TestResult wilcoxon_signed_rank(std::span<const double> x, double mu = 0.0,
                                Alternative alt = Alternative::TwoSided);
inline constexpr int kWilcoxonExactLimit = 15;

// Two-sample test of proportions k1/n1 vs k2/n2 reported as chi2 with one
// degree of freedom; Yates-corrected unless continuity is false, in which
// case chi2 equals the squared pooled z. effect_size is cohen_h(k1/n1, k2/n2).
// Throws Error{ZeroDenominator} when a sample is empty or the pooled
// proportion is 0 or 1, Error{InvalidArgument} when k > n.
TestResult proportions_ztest(long k1, long n1, long k2, long n2, bool continuity = true);

struct AnovaTable {
  double ss_between = 0, ss_within = 0;
  double df_between = 0, df_within = 0;
  double f = 0, p_value = 1;
};

// Throws Error{InsufficientData} for fewer than 2 groups or a group with
// fewer than 2 observations, Error{ZeroVariance} when every group is constant.
AnovaTable anova_table(const std::vector<std::vector<double>>& groups);
TestResult one_way_anova(const std::vector<std::vector<double>>& groups);

struct TukeyRow {
  int first = 0;  // difference is mean[second] - mean[first]
  int second = 0;
  double difference = 0;
  double lower = 0;
  double upper = 0;
  double p_adjusted = 1;
};

// Tukey-Kramer comparisons of every pair of groups, first < second,
// ordered by (first, second). Same preconditions as anova_table.
std::vector<TukeyRow> tukey_hsd(const std::vector<std::vector<double>>& groups, double confidence = 0.95);

// Throws Error{InsufficientData} for samples under 2, Error{ZeroVariance}.
double cohen_d(std::span<const double> x, std::span<const double> y);
// Throws Error{InvalidArgument} outside [0, 1].
double cohen_h(double p1, double p2);

// Pearson correlation of midranks, p from the t approximation with n - 2
// df. Throws Error{SizeMismatch}, Error{InsufficientData} for n < 3,
// Error{ConstantInput}.
TestResult spearman(std::span<const double> x, std::span<const double> y);

}  // namespace pdlab::stats
