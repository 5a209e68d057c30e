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

// Brute-force references for the statistics, shared by the unit and
// acceptance suites. Slow on purpose: they follow the definitions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace pdlab::oracles {

// Midranks by counting: rank = #smaller + (#equal + 1) / 2.
inline std::vector<double> rank_table(const std::vector<double>& v) {
  std::vector<double> r;
  for (double a : v) {
    double less = 0, equal = 0;
    for (double b : v) {
      less += b < a;
      equal += b == a;
    }
    r.push_back(less + (equal + 1) / 2);
  }
  return r;
}

inline double two_sided_from_tails(double le, double ge) { return std::min(1.0, 2 * std::min(le, ge)); }

// Exhaustive rank-sum enumeration over all subsets of size |x|.
inline double mwu_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> all = x;
  all.insert(all.end(), y.begin(), y.end());
  const auto r = rank_table(all);
  const int n = static_cast<int>(all.size()), n1 = static_cast<int>(x.size());
  double obs = 0;
  for (int i = 0; i < n1; ++i) obs += r[i];
  double total = 0, le = 0, ge = 0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(mask) != n1) continue;
    double s = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) s += r[i];
    }
    total += 1;
    le += s <= obs + 1e-9;
    ge += s >= obs - 1e-9;
  }
  return two_sided_from_tails(le / total, ge / total);
}

// Exhaustive sign-pattern enumeration.
inline double wilcoxon_oracle(const std::vector<double>& x, double mu) {
  std::vector<double> d;
  for (double v : x) {
    if (v != mu) d.push_back(std::fabs(v - mu));
  }
  const auto r = rank_table(d);
  double obs = 0;
  for (std::size_t i = 0, k = 0; i < x.size(); ++i) {
    if (x[i] == mu) continue;
    if (x[i] > mu) obs += r[k];
    ++k;
  }
  const int n = static_cast<int>(d.size());
  double le = 0, ge = 0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    double s = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) s += r[i];
    }
    le += s <= obs + 1e-9;
    ge += s >= obs - 1e-9;
  }
  const double total = std::ldexp(1.0, n);
  return two_sided_from_tails(le / total, ge / total);
}

// Studentized range CDF by composite Simpson's rule on both integrals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

inline double ptukey_oracle(double q, int k, double df) {
  auto phi = [](double z) { return std::exp(-z * z / 2) / std::sqrt(2 * std::numbers::pi); };
  auto Phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  auto range_cdf = [&](double w) {
    return k * simpson([&](double z) { return phi(z) * std::pow(Phi(z) - Phi(z - w), k - 1); }, -8, 8 + w, 800);
  };
  const double log_c = (df / 2) * std::log(df) - std::lgamma(df / 2) - (df / 2 - 1) * std::log(2.0);
  auto dens = [&](double s) { return s <= 0 ? 0.0 : std::exp(log_c + (df - 1) * std::log(s) - df * s * s / 2); };
  return simpson([&](double s) { return dens(s) * range_cdf(q * s); }, 0, 4, 800);
}

// F from raw sums: total SS minus within SS.
inline double anova_f(const std::vector<std::vector<double>>& groups) {
  double sum = 0, sumsq = 0, n = 0, within = 0;
  for (const auto& g : groups) {
    double gs = 0, gss = 0;
    for (double v : g) {
      gs += v;
      gss += v * v;
    }
    within += gss - gs * gs / static_cast<double>(g.size());
    sum += gs;
    sumsq += gss;
    n += static_cast<double>(g.size());
  }
  const double k = static_cast<double>(groups.size());
  const double between = (sumsq - sum * sum / n) - within;
  return (between / (k - 1)) / (within / (n - k));
}

}  // namespace pdlab::oracles
