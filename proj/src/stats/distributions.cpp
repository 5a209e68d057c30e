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

#include "pdlab/stats/distributions.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "pdlab/error.hpp"

namespace pdlab::stats {

namespace bm = boost::math;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double chi2_sf(double x, double df) {
  if (x <= 0) return 1.0;
  return bm::cdf(bm::complement(bm::chi_squared_distribution<double>(df), x));
}

double f_sf(double x, double df1, double df2) {
  if (x <= 0) return 1.0;
  return bm::cdf(bm::complement(bm::fisher_f_distribution<double>(df1, df2), x));
}

double t_two_sided(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  return 2.0 * bm::cdf(bm::complement(bm::students_t_distribution<double>(df), std::fabs(t)));
}

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// P(range of k standard normals <= w).
double range_cdf(double w, int k) {
  if (w <= 0) return 0.0;
  auto f = [&](double z) {
    const double inner = normal_cdf(z) - normal_cdf(z - w);
    if (inner <= 0) return 0.0;
    return kInvSqrt2Pi * std::exp(-0.5 * z * z) * std::pow(inner, k - 1);
  };
  // The integrand lives where phi(z) and the window [z - w, z] overlap.
  const double v = bm::quadrature::gauss_kronrod<double, 31>::integrate(f, -9.0, 9.0 + w, 12, 1e-13);
  return std::min(1.0, k * v);
}

}  // namespace

double ptukey(double q, int k, double df) {
  if (k < 2) throw Error(Errc::InvalidArgument, "studentized range needs k >= 2");
  if (!(df > 1)) throw Error(Errc::InvalidArgument, "studentized range needs df > 1");
  if (q <= 0) return 0.0;
  if (std::isinf(df) || df > 25000) return range_cdf(q, k);

  // s = sqrt(chi2_df / df) has density c * s^(df-1) * exp(-df s^2 / 2).
  const double log_c = (df / 2) * std::log(df) - std::lgamma(df / 2) - (df / 2 - 1) * std::log(2.0);
  auto density = [&](double s) {
    if (s <= 0) return 0.0;
    return std::exp(log_c + (df - 1) * std::log(s) - df * s * s / 2);
  };
  // Most of the mass of s lies within a few 1/sqrt(2 df) of 1.
  const double spread = 1.0 / std::sqrt(2.0 * df);
  const double hi = 1.0 + 40.0 * spread + 4.0;
  auto integrand = [&](double s) { return density(s) * range_cdf(q * s, k); };
  const double lo_break = std::max(0.0, 1.0 - 8.0 * spread);
  double total = 0.0;
  if (lo_break > 0) total += bm::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, lo_break, 10, 1e-12);
  total += bm::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lo_break, 1.0 + 8.0 * spread, 12, 1e-12);
  total += bm::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 1.0 + 8.0 * spread, hi, 10, 1e-12);
  return std::clamp(total, 0.0, 1.0);
}

double qtukey(double p, int k, double df) {
  if (!(p > 0 && p < 1)) throw Error(Errc::InvalidArgument, "qtukey needs p in (0, 1)");
  double hi = 2.0;
  while (ptukey(hi, k, df) < p) hi *= 2;
  std::uintmax_t iters = 200;
  auto [a, b] = bm::tools::toms748_solve([&](double q) { return ptukey(q, k, df) - p; }, 0.0, hi,
                                         bm::tools::eps_tolerance<double>(45), iters);
  return (a + b) / 2;
}

}  // namespace pdlab::stats
