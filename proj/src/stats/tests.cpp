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

#include "pdlab/stats/tests.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "pdlab/error.hpp"
#include "pdlab/stats/distributions.hpp"

namespace pdlab::stats {

namespace {

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }
double mean_of(std::span<const double> v) { return sum_of(v) / static_cast<double>(v.size()); }

double sample_variance(std::span<const double> v) {
  const double m = mean_of(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

// Sum over tie groups of t^3 - t.
double tie_term(std::span<const double> values) {
  std::map<double, int> counts;
  for (double v : values) ++counts[v];
  double t = 0;
  for (const auto& [v, c] : counts) t += static_cast<double>(c) * c * c - c;
  return t;
}

// Two integer-valued tails of a discrete distribution over doubled sums.
struct Tails {
  double le = 0, ge = 0;
};

double exact_p(const Tails& t, Alternative alt) {
  switch (alt) {
    case Alternative::Greater:
      return std::min(1.0, t.ge);
    case Alternative::Less:
      return std::min(1.0, t.le);
    case Alternative::TwoSided:
      break;
  }
  return std::min(1.0, 2.0 * std::min(t.le, t.ge));
}

double normal_p(double deviation, double sigma, Alternative alt) {
  double correction = 0.5;
  if (alt == Alternative::TwoSided) correction = deviation > 0 ? 0.5 : (deviation < 0 ? -0.5 : 0.0);
  if (alt == Alternative::Less) correction = -0.5;
  const double z = (deviation - correction) / sigma;
  switch (alt) {
    case Alternative::Greater:
      return 1.0 - normal_cdf(z);
    case Alternative::Less:
      return normal_cdf(z);
    case Alternative::TwoSided:
      break;
  }
  return std::min(1.0, 2.0 * std::min(normal_cdf(z), 1.0 - normal_cdf(z)));
}

}  // namespace

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y, Alternative alt) {
  if (x.empty() || y.empty()) throw Error(Errc::InsufficientData, "Mann-Whitney needs two nonempty samples");
  const std::size_t n1 = x.size(), n2 = y.size(), n = n1 + n2;
  std::vector<double> all(x.begin(), x.end());
  all.insert(all.end(), y.begin(), y.end());
  const auto ranks = midranks(all);
  double r1 = 0;
  for (std::size_t i = 0; i < n1; ++i) r1 += ranks[i];

  TestResult res;
  res.test = "mann_whitney_u";
  res.statistic_name = "W";
  res.statistic = r1 - static_cast<double>(n1) * (n1 + 1) / 2.0;
  if (std::all_of(all.begin(), all.end(), [&](double v) { return v == all.front(); })) {
    res.p_value = 1.0;
    res.exact = n <= kMannWhitneyExactLimit;
    return res;
  }

  if (n <= kMannWhitneyExactLimit) {
    // count[j][s]: ways to pick j of the ranks with doubled sum s.
    std::vector<int> doubled(n);
    int total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      doubled[i] = static_cast<int>(std::lround(2 * ranks[i]));
      total += doubled[i];
    }
    std::vector<std::vector<double>> count(n1 + 1, std::vector<double>(total + 1, 0.0));
    count[0][0] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = std::min(i + 1, n1); j >= 1; --j) {
        for (int s = total; s >= doubled[i]; --s) count[j][s] += count[j - 1][s - doubled[i]];
      }
    }
    const int obs = static_cast<int>(std::lround(2 * r1));
    double all_ways = 0, le = 0, ge = 0;
    for (int s = 0; s <= total; ++s) {
      const double c = count[n1][s];
      all_ways += c;
      if (s <= obs) le += c;
      if (s >= obs) ge += c;
    }
    res.p_value = exact_p({le / all_ways, ge / all_ways}, alt);
    res.exact = true;
    return res;
  }

  const double dn = static_cast<double>(n);
  const double var = static_cast<double>(n1) * n2 / 12.0 * ((dn + 1) - tie_term(all) / (dn * (dn - 1)));
  res.p_value = normal_p(res.statistic - static_cast<double>(n1) * n2 / 2.0, std::sqrt(var), alt);
  return res;
}

TestResult wilcoxon_signed_rank(std::span<const double> x, double mu, Alternative alt) {
  std::vector<double> d;
  for (double v : x) {
    if (v - mu != 0) d.push_back(v - mu);
  }
  if (d.empty()) throw Error(Errc::AllZeroDifferences, "every observation equals the location");
  std::vector<double> abs_d(d.size());
  std::transform(d.begin(), d.end(), abs_d.begin(), [](double v) { return std::fabs(v); });
  const auto ranks = midranks(abs_d);
  double v_stat = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > 0) v_stat += ranks[i];
  }

  TestResult res;
  res.test = "wilcoxon_signed_rank";
  res.statistic_name = "V";
  res.statistic = v_stat;
  const std::size_t n = d.size();
  if (n <= static_cast<std::size_t>(kWilcoxonExactLimit)) {
    std::vector<int> doubled(n);
    int total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      doubled[i] = static_cast<int>(std::lround(2 * ranks[i]));
      total += doubled[i];
    }
    // Each rank independently carries a positive or negative sign.
    std::vector<double> count(total + 1, 0.0);
    count[0] = 1;
    for (int r : doubled) {
      for (int s = total; s >= r; --s) count[s] += count[s - r];
    }
    const int obs = static_cast<int>(std::lround(2 * v_stat));
    const double all_ways = std::ldexp(1.0, static_cast<int>(n));
    double le = 0, ge = 0;
    for (int s = 0; s <= total; ++s) {
      if (s <= obs) le += count[s];
      if (s >= obs) ge += count[s];
    }
    res.p_value = exact_p({le / all_ways, ge / all_ways}, alt);
    res.exact = true;
    return res;
  }
  const double dn = static_cast<double>(n);
  const double var = dn * (dn + 1) * (2 * dn + 1) / 24.0 - tie_term(abs_d) / 48.0;
  res.p_value = normal_p(v_stat - dn * (dn + 1) / 4.0, std::sqrt(var), alt);
  return res;
}

TestResult proportions_ztest(long k1, long n1, long k2, long n2, bool continuity) {
  if (n1 <= 0 || n2 <= 0) throw Error(Errc::ZeroDenominator, "proportions test needs nonempty samples");
  if (k1 < 0 || k2 < 0 || k1 > n1 || k2 > n2) throw Error(Errc::InvalidArgument, "counts must lie in [0, n]");
  const double a = static_cast<double>(k1), b = static_cast<double>(k2);
  const double m1 = static_cast<double>(n1), m2 = static_cast<double>(n2);
  const double pooled = (a + b) / (m1 + m2);
  if (pooled == 0.0 || pooled == 1.0) {
    throw Error(Errc::ZeroDenominator, "pooled proportion is " + std::to_string(pooled));
  }
  // 2x2 table rows (success, failure) per sample.
  const double observed[2][2] = {{a, m1 - a}, {b, m2 - b}};
  const double expected[2][2] = {{m1 * pooled, m1 * (1 - pooled)}, {m2 * pooled, m2 * (1 - pooled)}};
  double yates = 0;
  if (continuity) {
    const double delta = a / m1 - b / m2;
    yates = std::min(0.5, std::fabs(delta) / (1 / m1 + 1 / m2));
  }
  double chi2 = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double dev = std::fabs(observed[i][j] - expected[i][j]) - yates;
      chi2 += dev * dev / expected[i][j];
    }
  }
  TestResult res;
  res.test = "proportions_ztest";
  res.statistic_name = "chi2";
  res.statistic = chi2;
  res.df = 1;
  res.p_value = chi2_sf(chi2, 1);
  res.effect_size = cohen_h(a / m1, b / m2);
  return res;
}

AnovaTable anova_table(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw Error(Errc::InsufficientData, "ANOVA needs at least 2 groups");
  double grand = 0;
  std::size_t n = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw Error(Errc::InsufficientData, "every ANOVA group needs 2 observations");
    grand += sum_of(g);
    n += g.size();
  }
  grand /= static_cast<double>(n);
  AnovaTable t;
  for (const auto& g : groups) {
    const double m = mean_of(g);
    t.ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) t.ss_within += (v - m) * (v - m);
  }
  if (t.ss_within == 0) throw Error(Errc::ZeroVariance, "all groups are constant");
  t.df_between = static_cast<double>(groups.size() - 1);
  t.df_within = static_cast<double>(n - groups.size());
  t.f = (t.ss_between / t.df_between) / (t.ss_within / t.df_within);
  t.p_value = f_sf(t.f, t.df_between, t.df_within);
  return t;
}

TestResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  const auto t = anova_table(groups);
  TestResult res;
  res.test = "one_way_anova";
  res.statistic_name = "F";
  res.statistic = t.f;
  res.p_value = t.p_value;
  res.df = t.df_between;
  res.df2 = t.df_within;
  return res;
}

std::vector<TukeyRow> tukey_hsd(const std::vector<std::vector<double>>& groups, double confidence) {
  const auto t = anova_table(groups);
  const int k = static_cast<int>(groups.size());
  const double mse = t.ss_within / t.df_within;
  const double q_crit = qtukey(confidence, k, t.df_within);
  std::vector<TukeyRow> rows;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      TukeyRow r;
      r.first = i;
      r.second = j;
      r.difference = mean_of(groups[j]) - mean_of(groups[i]);
      const double se = std::sqrt(mse / 2.0 * (1.0 / groups[i].size() + 1.0 / groups[j].size()));
      r.lower = r.difference - q_crit * se;
      r.upper = r.difference + q_crit * se;
      r.p_adjusted = std::clamp(1.0 - ptukey(std::fabs(r.difference) / se, k, t.df_within), 0.0, 1.0);
      rows.push_back(r);
    }
  }
  return rows;
}

double cohen_d(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() < 2) throw Error(Errc::InsufficientData, "Cohen's d needs 2 observations per sample");
  const double n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
  const double pooled = ((n1 - 1) * sample_variance(x) + (n2 - 1) * sample_variance(y)) / (n1 + n2 - 2);
  if (pooled <= 0) throw Error(Errc::ZeroVariance, "pooled standard deviation is zero");
  return (mean_of(x) - mean_of(y)) / std::sqrt(pooled);
}

double cohen_h(double p1, double p2) {
  if (!(p1 >= 0 && p1 <= 1 && p2 >= 0 && p2 <= 1)) throw Error(Errc::InvalidArgument, "proportions must lie in [0, 1]");
  return 2 * std::asin(std::sqrt(p1)) - 2 * std::asin(std::sqrt(p2));
}

TestResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(Errc::SizeMismatch, "spearman needs paired samples");
  if (x.size() < 3) throw Error(Errc::InsufficientData, "spearman needs 3 pairs");
  const auto rx = midranks(x), ry = midranks(y);
  const double mx = mean_of(rx), my = mean_of(ry);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) throw Error(Errc::ConstantInput, "spearman input is constant");
  TestResult res;
  res.test = "spearman";
  res.statistic_name = "rho";
  res.statistic = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(x.size()) - 2;
  res.df = df;
  const double r = res.statistic;
  res.p_value = std::fabs(r) >= 1.0 ? 0.0 : t_two_sided(r * std::sqrt(df / (1 - r * r)), df);
  return res;
}

}  // namespace pdlab::stats
