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

#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pdlab/game/rng.hpp"
#include "pdlab/stats/distributions.hpp"
#include "pdlab/stats/glm.hpp"
#include "pdlab/stats/tests.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace pdlab;
using namespace pdlab::stats;
using pdlab::testing::throws_code;
using namespace pdlab::oracles;

namespace {

bool nonincreasing(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] > trace[i - 1] + 1e-9 * (1 + trace[i - 1])) return false;
  }
  return true;
}

std::vector<double> draw_sample(game::Rng& rng, int n, int levels) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(static_cast<double>(game::uniform_below(rng, levels)));
  return v;
}

}  // namespace

TEST_CASE("derive_breach truth table") {
  CHECK(derive_breach(true, game::Choice::B));
  CHECK_FALSE(derive_breach(true, game::Choice::A));
  CHECK_FALSE(derive_breach(false, game::Choice::B));
  CHECK_FALSE(derive_breach(false, game::Choice::A));
}

TEST_CASE("midranks") {
  const std::vector<double> v = {3, 1, 3, 2, 3};
  CHECK(midranks(v) == std::vector<double>{4, 1, 4, 2, 4});
  CHECK(midranks(v) == rank_table(v));
}

TEST_CASE("Mann-Whitney examples") {
  const std::vector<double> a = {1, 2, 3}, b = {4, 5, 6};
  auto r = mann_whitney_u(a, b);
  CHECK(r.statistic == 0);
  CHECK(r.exact);
  CHECK(r.p_value == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(mann_whitney_u(b, a).statistic == 9);

  const std::vector<double> e = {2, 5, 5, 7};
  CHECK(mann_whitney_u(e, e).p_value >= 0.99);

  const std::vector<double> x = {1, 2}, y = {2, 3};
  CHECK(std::fabs(mann_whitney_u(x, y).p_value - mwu_oracle(x, y)) < 1e-12);

  const std::vector<double> same = {4, 4, 4};
  r = mann_whitney_u(same, same);
  CHECK(r.p_value == 1.0);
  CHECK(r.statistic == 4.5);
  CHECK(throws_code([] { mann_whitney_u(std::vector<double>{}, std::vector<double>{1}); }, Errc::InsufficientData));
}

TEST_CASE("property: Mann-Whitney exact p equals enumeration for n1 + n2 <= 10") {
  game::Rng rng(2024);
  for (int trial = 0; trial < 1500; ++trial) {
    const int n1 = 1 + static_cast<int>(game::uniform_below(rng, 6));
    const int n2 = 1 + static_cast<int>(game::uniform_below(rng, 10 - n1));
    const int levels = 2 + static_cast<int>(game::uniform_below(rng, 12));
    const auto x = draw_sample(rng, n1, levels), y = draw_sample(rng, n2, levels);
    const auto r = mann_whitney_u(x, y);
    REQUIRE(std::fabs(r.p_value - mwu_oracle(x, y)) < 1e-12);
    REQUIRE(r.p_value >= 0);
    REQUIRE(r.p_value <= 1);
  }
}

TEST_CASE("Mann-Whitney normal approximation matches a reference implementation") {
  const std::vector<double> x = {1.5, 2, 2, 3, 4, 4, 4, 5.5, 6, 7, 8, 8, 9};
  const std::vector<double> y = {3, 4, 5, 5, 6, 7, 8, 9, 9, 10, 11, 12};
  auto r = mann_whitney_u(x, y);
  CHECK_FALSE(r.exact);
  CHECK(r.statistic == 40);
  CHECK(r.p_value == doctest::Approx(0.040480375851375545).epsilon(1e-12));
  CHECK(mann_whitney_u(x, y, Alternative::Greater).p_value == doctest::Approx(0.9822867003661222).epsilon(1e-12));
}

TEST_CASE("Wilcoxon examples") {
  const std::vector<double> sym = {-2, -1, 1, 2};
  CHECK(wilcoxon_signed_rank(sym).p_value >= 0.99);
  const std::vector<double> inc = {1, 2, 3};
  auto r = wilcoxon_signed_rank(inc);
  CHECK(r.statistic == 6);
  CHECK(r.p_value == doctest::Approx(0.25).epsilon(1e-14));
  const std::vector<double> zeros = {0, 0, 0};
  CHECK(throws_code([&] { wilcoxon_signed_rank(zeros); }, Errc::AllZeroDifferences));
  const std::vector<double> shifted = {5, 5, 6};
  CHECK(throws_code([&] { wilcoxon_signed_rank(std::vector<double>{5, 5}, 5); }, Errc::AllZeroDifferences));
  CHECK(wilcoxon_signed_rank(shifted, 5).statistic == 1);

  // Risk-aversion ratings all above zero: one-sided p = 1/32.
  const std::vector<double> risk = {3, 3, 2, 2, 1};
  r = wilcoxon_signed_rank(risk, 0, Alternative::Greater);
  CHECK(r.statistic == 15);
  CHECK(r.p_value == doctest::Approx(1.0 / 32).epsilon(1e-14));
  CHECK(wilcoxon_signed_rank(risk).p_value == doctest::Approx(1.0 / 16).epsilon(1e-14));
}

TEST_CASE("property: Wilcoxon exact p equals sign-pattern enumeration for n <= 12") {
  game::Rng rng(7);
  for (int trial = 0; trial < 1500; ++trial) {
    const int n = 1 + static_cast<int>(game::uniform_below(rng, 12));
    auto x = draw_sample(rng, n, 9);
    for (auto& v : x) v -= 4;  // values in [-4, 4], zeros included
    if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0; })) continue;
    const auto r = wilcoxon_signed_rank(x);
    REQUIRE(std::fabs(r.p_value - wilcoxon_oracle(x, 0)) < 1e-12);
  }
}

TEST_CASE("Wilcoxon normal approximation matches a reference implementation") {
  const std::vector<double> d = {0.5, -1, 2, 2, 3, -3, 4, 1.5, 2.5, 5, -0.5, 6, 7, 2, 3, 1, -2, 8};
  const auto r = wilcoxon_signed_rank(d);
  CHECK_FALSE(r.exact);
  CHECK(r.statistic == 146.5);
  CHECK(r.p_value == doctest::Approx(0.008295300306159742).epsilon(1e-12));
}

TEST_CASE("proportions test") {
  auto r = proportions_ztest(50, 100, 50, 100);
  CHECK(r.statistic == doctest::Approx(0.0));
  CHECK(r.p_value == doctest::Approx(1.0));

  // Agreement counts rebuilt from 87.5% and 81.1% of 1440 interactions.
  r = proportions_ztest(1260, 1440, 1168, 1440);
  CHECK(std::fabs(r.statistic - 22.697) / 22.697 <= 0.05);
  CHECK(r.statistic == doctest::Approx(21.731422489831026).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(3.1361209289995946e-06).epsilon(1e-9));
  CHECK(proportions_ztest(37, 80, 52, 90).statistic == doctest::Approx(1.8178328401226864).epsilon(1e-12));

  CHECK(throws_code([] { proportions_ztest(0, 0, 1, 2); }, Errc::ZeroDenominator));
  CHECK(throws_code([] { proportions_ztest(0, 5, 0, 7); }, Errc::ZeroDenominator));
  CHECK(throws_code([] { proportions_ztest(6, 5, 0, 7); }, Errc::InvalidArgument));
}

TEST_CASE("property: uncorrected chi2 equals the squared pooled z") {
  game::Rng rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const long n1 = 1 + static_cast<long>(game::uniform_below(rng, 2000));
    const long n2 = 1 + static_cast<long>(game::uniform_below(rng, 2000));
    const long k1 = static_cast<long>(game::uniform_below(rng, n1 + 1));
    const long k2 = static_cast<long>(game::uniform_below(rng, n2 + 1));
    const double p = static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
    if (p == 0 || p == 1) continue;
    const double z = (static_cast<double>(k1) / n1 - static_cast<double>(k2) / n2) /
                     std::sqrt(p * (1 - p) * (1.0 / n1 + 1.0 / n2));
    const auto r = proportions_ztest(k1, n1, k2, n2, false);
    REQUIRE(std::fabs(r.statistic - z * z) <= 1e-12 * std::max(1.0, z * z));
    // Yates never increases the statistic.
    REQUIRE(proportions_ztest(k1, n1, k2, n2, true).statistic <= r.statistic + 1e-12);
  }
}

TEST_CASE("ANOVA against the sum-of-squares definition") {
  const std::vector<std::vector<double>> same = {{1, 2, 3}, {1, 2, 3}};
  auto r = one_way_anova(same);
  CHECK(r.statistic == doctest::Approx(0.0));
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK(throws_code([] { one_way_anova({{1, 2, 3}}); }, Errc::InsufficientData));
  CHECK(throws_code([] { one_way_anova({{1, 2}, {3}}); }, Errc::InsufficientData));
  CHECK(throws_code([] { one_way_anova({{1, 1}, {3, 3}}); }, Errc::ZeroVariance));

  const std::vector<std::vector<double>> small = {{1, 2, 3, 4.5}, {2, 3, 5, 6, 7}, {5, 6, 8, 9}};
  r = one_way_anova(small);
  CHECK(r.statistic == doctest::Approx(5.668785290696023).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(0.022608676851856878).epsilon(1e-9));
  CHECK(*r.df == 2);
  CHECK(*r.df2 == 10);

  std::mt19937_64 gen(42);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double means[] = {0.8, 0.7, 0.75, 0.5};
  std::vector<std::vector<double>> groups(4);
  for (int g = 0; g < 4; ++g) {
    for (int i = 0; i < 144; ++i) groups[g].push_back(means[g] + noise(gen));
  }
  // Oracle: total SS minus within SS, from raw sums.
  double sum = 0, sumsq = 0, n = 0, within = 0;
  for (const auto& g : groups) {
    double gs = 0, gss = 0;
    for (double v : g) {
      gs += v;
      gss += v * v;
    }
    within += gss - gs * gs / g.size();
    sum += gs;
    sumsq += gss;
    n += g.size();
  }
  const double between = (sumsq - sum * sum / n) - within;
  const double f = (between / 3) / (within / (n - 4));
  const auto t = anova_table(groups);
  CHECK(std::fabs(t.f - f) <= 1e-10 * f);
  CHECK(std::fabs(one_way_anova(groups).statistic - f) <= 1e-10 * f);
}

TEST_CASE("studentized range distribution") {
  CHECK(ptukey(3.5, 4, 20) == doctest::Approx(0.9050415494536981).epsilon(1e-8));
  CHECK(ptukey(2.1, 3, 7) == doctest::Approx(0.6463914788692827).epsilon(1e-8));
  CHECK(qtukey(0.95, 3, 10) == doctest::Approx(3.876776750013158).epsilon(1e-8));
  CHECK(qtukey(0.95, 4, 572) == doctest::Approx(3.6438611876506686).epsilon(1e-8));
  CHECK(ptukey(0, 3, 10) == 0);
  for (double q : {0.5, 1.5, 2.5, 3.5, 5.0}) {
    for (int k : {2, 3, 5}) {
      for (double df : {5.0, 12.0, 40.0}) {
        CHECK(std::fabs(ptukey(q, k, df) - ptukey_oracle(q, k, df)) < 1e-6);
      }
    }
  }
  CHECK(throws_code([] { ptukey(1, 1, 10); }, Errc::InvalidArgument));
}

TEST_CASE("Tukey HSD") {
  const std::vector<std::vector<double>> small = {{1, 2, 3, 4.5}, {2, 3, 5, 6, 7}, {5, 6, 8, 9}};
  const auto rows = tukey_hsd(small);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].first == 0);
  CHECK(rows[0].second == 1);
  CHECK(rows[0].difference == doctest::Approx(4.6 - 2.625));
  CHECK(rows[0].lower == doctest::Approx(-1.41018039).epsilon(1e-7));
  CHECK(rows[0].upper == doctest::Approx(5.36018039).epsilon(1e-7));
  CHECK(rows[0].p_adjusted == doctest::Approx(0.29027893).epsilon(1e-6));
  CHECK(rows[1].p_adjusted == doctest::Approx(0.01809107).epsilon(1e-6));
  CHECK(rows[2].p_adjusted == doctest::Approx(0.17703172).epsilon(1e-6));

  const std::vector<std::vector<double>> equal = {{1, 2, 3}, {1, 2, 3}};
  const auto e = tukey_hsd(equal);
  REQUIRE(e.size() == 1);
  CHECK(e[0].difference == 0);
  CHECK(e[0].lower < 0);
  CHECK(e[0].upper > 0);
  CHECK(e[0].p_adjusted == doctest::Approx(1.0));

  // Adjusted p against the Simpson oracle on planted data.
  std::mt19937_64 gen(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int k = 2; k <= 5; ++k) {
    std::vector<std::vector<double>> groups(k);
    for (int g = 0; g < k; ++g) {
      for (int i = 0; i < 6 + g; ++i) groups[g].push_back(0.4 * g + noise(gen));
    }
    const auto t = anova_table(groups);
    const auto hsd = tukey_hsd(groups);
    CHECK(static_cast<int>(hsd.size()) == k * (k - 1) / 2);
    for (const auto& row : hsd) {
      const double se = std::sqrt(t.ss_within / t.df_within / 2 *
                                  (1.0 / groups[row.first].size() + 1.0 / groups[row.second].size()));
      const double oracle = 1 - ptukey_oracle(std::fabs(row.difference) / se, k, t.df_within);
      CHECK(std::fabs(row.p_adjusted - oracle) < 1e-6);
    }
  }
}

TEST_CASE("Cohen's d and h") {
  const std::vector<double> x = {0, 0, 1, 1}, y = {1, 1, 2, 2};
  CHECK(cohen_d(x, y) == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-14));
  CHECK(cohen_d(x, x) == 0);
  CHECK(throws_code([] { cohen_d(std::vector<double>{2, 2}, std::vector<double>{2, 2}); }, Errc::ZeroVariance));
  CHECK(throws_code([] { cohen_d(std::vector<double>{2}, std::vector<double>{2, 3}); }, Errc::InsufficientData));

  CHECK(cohen_h(0.4, 0.4) == 0);
  CHECK(cohen_h(1, 0) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(cohen_h(0.25, 0.75) == doctest::Approx(-1.0471975511965979).epsilon(1e-14));
  CHECK(throws_code([] { cohen_h(1.1, 0); }, Errc::InvalidArgument));

  game::Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const double p1 = game::uniform_unit(rng), p2 = game::uniform_unit(rng);
    REQUIRE(cohen_h(p1, p2) == -cohen_h(p2, p1));
    auto a = draw_sample(rng, 5, 7), b = draw_sample(rng, 6, 7);
    a[0] = 0;
    a[1] = 6;
    REQUIRE(cohen_d(a, b) == doctest::Approx(-cohen_d(b, a)).epsilon(1e-14));
  }
}

TEST_CASE("Spearman correlation") {
  const std::vector<double> x = {3, 1, 4, 1.5, 9, 2.6};
  CHECK(spearman(x, x).statistic == doctest::Approx(1.0));
  std::vector<double> rev = {1, 2, 3, 4, 5}, fwd = {5, 4, 3, 2, 1};
  CHECK(spearman(rev, fwd).statistic == doctest::Approx(-1.0));
  CHECK(spearman(rev, fwd).p_value == 0);

  // n = 5 with one tie against an explicit rank table.
  const std::vector<double> a = {10, 20, 20, 40, 50}, b = {3, 1, 4, 5, 2};
  const std::vector<double> ra = {1, 2.5, 2.5, 4, 5}, rb = {3, 1, 4, 5, 2};
  double ma = 3, mb = 3, sab = 0, saa = 0, sbb = 0;
  for (int i = 0; i < 5; ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  CHECK(std::fabs(spearman(a, b).statistic - sab / std::sqrt(saa * sbb)) < 1e-12);

  const std::vector<double> u = {1, 2, 3, 4, 5, 6, 7, 8}, v = {2, 1, 4, 3, 7, 8, 6, 5};
  const auto r = spearman(u, v);
  CHECK(r.statistic == doctest::Approx(0.7380952380952381).epsilon(1e-13));
  CHECK(r.p_value == doctest::Approx(0.03655276105286081).epsilon(1e-9));

  CHECK(throws_code([] { spearman(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}); }, Errc::SizeMismatch));
  CHECK(throws_code([] { spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}); }, Errc::InsufficientData));
  CHECK(throws_code([] { spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}); },
                    Errc::ConstantInput));
}

TEST_CASE("GLM intercept-only fits") {
  Design none;
  const std::vector<double> s = {50}, t = {100};
  auto fit = fit_binomial_glm(none, s, t);
  REQUIRE(fit.terms.size() == 1);
  CHECK(std::fabs(fit.terms[0].estimate) < 1e-12);
  CHECK(fit.terms[0].std_error == doctest::Approx(0.2).epsilon(1e-12));

  game::Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> ss, tt;
    double S = 0, T = 0;
    for (int r = 0; r < 4; ++r) {
      tt.push_back(1 + static_cast<double>(game::uniform_below(rng, 30)));
      ss.push_back(static_cast<double>(game::uniform_below(rng, static_cast<std::uint64_t>(tt.back()) + 1)));
      S += ss.back();
      T += tt.back();
    }
    if (S == 0 || S == T) continue;
    fit = fit_binomial_glm(none, ss, tt);
    REQUIRE(std::fabs(inverse_logit(fit.terms[0].estimate) - S / T) < 1e-12);
    REQUIRE(fit.residual_deviance <= fit.null_deviance + 1e-9);
  }
}

TEST_CASE("GLM matches a reference fit on a small design") {
  Design d;
  d.add("x1", {0.1, 0.5, 0.9, 1.3, 1.7, 2.1, 2.5, 2.9});
  d.add("x2", {1, 0, 1, 0, 1, 1, 0, 0});
  const std::vector<double> s = {2, 3, 6, 5, 9, 11, 10, 14}, t = {15, 12, 14, 10, 15, 16, 13, 17};
  const auto fit = fit_binomial_glm(d, s, t);
  REQUIRE(fit.terms.size() == 3);
  const double est[] = {-1.65815879512597, 1.151217588393841, 0.076367327603209};
  const double se[] = {0.568277993585168, 0.259537283311461, 0.450450597329097};
  const double p[] = {3.524362482460635e-03, 9.179318301909515e-06, 8.653755207378299e-01};
  for (int i = 0; i < 3; ++i) {
    CHECK(fit.terms[i].estimate == doctest::Approx(est[i]).epsilon(1e-9));
    CHECK(fit.terms[i].std_error == doctest::Approx(se[i]).epsilon(1e-8));
    CHECK(fit.terms[i].p_value == doctest::Approx(p[i]).epsilon(1e-6));
  }
  CHECK(fit.null_deviance == doctest::Approx(26.478008505659204).epsilon(1e-10));
  CHECK(fit.residual_deviance == doctest::Approx(0.662839580974569).epsilon(1e-8));
  CHECK(fit.df_residual == 5);
  CHECK(fit.aic == doctest::Approx(29.5524403059586).epsilon(1e-8));
  CHECK(nonincreasing(fit.deviance_trace));
  CHECK(predict(fit, std::vector<double>{0.1, 1}) ==
        doctest::Approx(inverse_logit(est[0] + est[1] * 0.1 + est[2])).epsilon(1e-9));
}

TEST_CASE("GLM recovers planted coefficients from 1e5 draws") {
  const double beta[] = {-0.3, 0.8, -0.5, 0.25};
  std::mt19937_64 gen(123);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = 100000;
  std::vector<std::vector<double>> cols(3, std::vector<double>(n));
  std::vector<double> s(n), t(n, 1.0);
  for (int i = 0; i < n; ++i) {
    double eta = beta[0];
    for (int j = 0; j < 3; ++j) {
      cols[j][i] = norm(gen);
      eta += beta[j + 1] * cols[j][i];
    }
    s[i] = unit(gen) < inverse_logit(eta) ? 1 : 0;
  }
  Design d;
  d.add("a", cols[0]);
  d.add("b", cols[1]);
  d.add("c", cols[2]);
  const auto start = std::chrono::steady_clock::now();
  const auto fit = fit_binomial_glm(d, s, t);
  const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 5.0);
  for (int j = 0; j < 4; ++j) CHECK(std::fabs(fit.terms[j].estimate - beta[j]) < 0.05);
  CHECK(nonincreasing(fit.deviance_trace));
}

TEST_CASE("GLM failure modes") {
  Design sep;
  sep.add("x", {0, 0, 0, 1, 1, 1});
  const std::vector<double> s = {0, 0, 0, 5, 5, 5}, t = {5, 5, 5, 5, 5, 5};
  CHECK(throws_code([&] { fit_binomial_glm(sep, s, t); }, Errc::SeparationDetected));

  Design dup;
  dup.add("x", {1, 2, 3, 4});
  dup.add("y", {2, 4, 6, 8});
  const std::vector<double> s4 = {1, 2, 2, 3}, t4 = {5, 5, 5, 5};
  CHECK(throws_code([&] { fit_binomial_glm(dup, s4, t4); }, Errc::RankDeficientDesign));
  const std::vector<double> bad = {6, 2, 2, 3};
  Design one;
  one.add("x", {1, 2, 3, 4});
  CHECK(throws_code([&] { fit_binomial_glm(one, bad, t4); }, Errc::InvalidArgument));
  CHECK(throws_code([&] { fit_binomial_glm(one, std::vector<double>{1}, t4); }, Errc::SizeMismatch));
}

TEST_CASE("breach response curve shapes") {
  for (double c0 = -3.0; c0 <= 3.0; c0 += 0.25) {
    const std::vector<double> coefs = {c0, 2.87, -9.65, 5.96};
    const auto curve = polynomial_curve(coefs);
    REQUIRE(curve.size() == 1001);
    const auto peaks = interior_maxima(curve);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0] > 0);
    CHECK(peaks[0] < 1);
    // The cubic's derivative 2.87 - 19.3 x + 17.88 x^2 vanishes at the peak.
    const double root = (19.3 - std::sqrt(19.3 * 19.3 - 4 * 17.88 * 2.87)) / (2 * 17.88);
    CHECK(std::fabs(peaks[0] - root) < 2e-3);
  }
  const auto flat = polynomial_curve(std::vector<double>{0.4, 0, 0, 0});
  CHECK(interior_maxima(flat).empty());
  CHECK(std::all_of(flat.begin(), flat.end(), [&](const CurvePoint& p) { return p.p == flat[0].p; }));
  const auto up = polynomial_curve(std::vector<double>{-1, 2});
  for (std::size_t i = 1; i < up.size(); ++i) REQUIRE(up[i].p > up[i - 1].p);
  CHECK(interior_maxima(up).empty());

  GlmFit fit;
  fit.terms = {{"(Intercept)", 0.5}, {"breach", 2.87}, {"breach^2", -9.65}, {"breach^3", 5.96}};
  CHECK(interior_maxima(breach_response_curve(fit)).size() == 1);
  GlmFit bare;
  bare.terms = {{"(Intercept)", 0.5}};
  CHECK(throws_code([&] { breach_response_curve(bare); }, Errc::SchemaError));
}

TEST_CASE("breach-frequency binning and fit") {
  std::vector<BreachExposure> ex = {{0.0, 8, 10}, {0.05, 9, 10}, {0.1, 9, 10}, {0.95, 2, 10}, {1.0, 1, 10}};
  const auto bins = bin_breach_frequencies(ex);
  REQUIRE(bins.size() == 3);
  CHECK(bins[0].midpoint == doctest::Approx(0.05));
  CHECK(bins[0].successes == 17);
  CHECK(bins[0].trials == 20);
  CHECK(bins[1].midpoint == doctest::Approx(0.15));
  CHECK(bins[2].midpoint == doctest::Approx(0.95));
  CHECK(bins[2].trials == 20);

  // Planted cubic response over all ten bins.
  const double c[] = {0.3, 2.87, -9.65, 5.96};
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<BreachExposure> many;
  for (int i = 0; i < 20000; ++i) {
    const double f = unit(gen);
    const double m = (std::min(9, static_cast<int>(f * 10)) + 0.5) / 10;
    const double p = inverse_logit(c[0] + c[1] * m + c[2] * m * m + c[3] * m * m * m);
    int coop = 0;
    for (int r = 0; r < 10; ++r) coop += unit(gen) < p;
    many.push_back({f, coop, 10});
  }
  const auto fit = fit_breach_glm(many);
  REQUIRE(fit.terms.size() == 4);
  CHECK(fit.term("breach^3"));
  CHECK(fit.terms[1].estimate > 0);
  CHECK(fit.terms[2].estimate < 0);
  CHECK(fit.terms[3].estimate > 0);
  CHECK(interior_maxima(breach_response_curve(fit)).size() == 1);
}

namespace {

std::vector<ParticipantPerception> planted_perceptions(std::uint64_t seed, int n, std::map<std::string, double> beta) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const char* pairings[] = {"HF", "HC", "HS"};
  std::vector<ParticipantPerception> rows;
  for (int i = 0; i < n; ++i) {
    ParticipantPerception p;
    p.pairing = pairings[i % 3];
    p.rounds = 10;
    double eta = -0.2;
    for (auto name : kPerceptionPredictors) p.predictors[std::string(name)] = norm(gen);
    p.predictors[std::string(kNormPredictor)] = norm(gen);
    for (const auto& [name, b] : beta) eta += b * p.predictors[name];
    const double pr = inverse_logit(eta);
    for (int r = 0; r < 10; ++r) p.cooperations += unit(gen) < pr;
    rows.push_back(p);
  }
  return rows;
}

}  // namespace

TEST_CASE("questionnaire GLM") {
  const std::map<std::string, double> beta = {
      {"normative_expectation", 1.0}, {"intelligence", 0.4}, {"cooperativeness", -0.35}, {"clarity", 0.3}};
  auto rows = planted_perceptions(77, 3000, beta);
  const auto fit = questionnaire_glm(rows, GlmScope::PooledAgents);
  CHECK(fit.terms.size() == 1 + 15 + 2);
  CHECK(fit.term("treatment_HC"));
  CHECK(fit.term("treatment_HS"));
  CHECK_FALSE(fit.term("treatment_HF"));
  for (const auto& [name, b] : beta) {
    const auto* t = fit.term(name);
    REQUIRE(t);
    CHECK((t->estimate > 0) == (b > 0));
    CHECK(t->p_value < 0.01);
  }

  // Rescaling a predictor leaves z and p untouched.
  auto scaled = rows;
  for (auto& r : scaled) r.predictors["intelligence"] = 3.5 * r.predictors["intelligence"] + 12;
  const auto fit2 = questionnaire_glm(scaled, GlmScope::PooledAgents);
  for (std::size_t i = 0; i < fit.terms.size(); ++i) {
    CHECK(fit2.terms[i].z == doctest::Approx(fit.terms[i].z).epsilon(1e-8));
    CHECK(fit2.terms[i].p_value == doctest::Approx(fit.terms[i].p_value).epsilon(1e-6));
  }

  CHECK(throws_code([&] { questionnaire_glm(rows, GlmScope::HumanHuman); }, Errc::InsufficientData));
  for (auto& r : rows) r.pairing = "HH";
  CHECK(questionnaire_glm(rows, GlmScope::HumanHuman).terms.size() == 16);
  rows[0].predictors.erase("normative_expectation");
  CHECK(throws_code([&] { questionnaire_glm(rows, GlmScope::HumanHuman); }, Errc::SchemaError));
}
