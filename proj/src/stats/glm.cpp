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

#include "pdlab/stats/glm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "pdlab/error.hpp"
#include "pdlab/stats/distributions.hpp"

namespace pdlab::stats {

void Design::add(std::string name, std::vector<double> column) {
  if (!columns.empty() && column.size() != rows()) throw Error(Errc::SizeMismatch, "column " + name + " has wrong length");
  names.push_back(std::move(name));
  columns.push_back(std::move(column));
}

const GlmTerm* GlmFit::term(std::string_view name) const {
  for (const auto& t : terms) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

double inverse_logit(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

namespace {

// Fitted values beyond this linear predictor are numerically 0 or 1.
constexpr double kSeparationEta = 30.0;

double binomial_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& n, const Eigen::VectorXd& mu) {
  double d = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] > 0) d += y[i] * std::log(y[i] / (n[i] * mu[i]));
    if (n[i] - y[i] > 0) d += (n[i] - y[i]) * std::log((n[i] - y[i]) / (n[i] * (1 - mu[i])));
  }
  return 2 * d;
}

Eigen::VectorXd fitted(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta) {
  Eigen::VectorXd eta = X * beta;
  return eta.unaryExpr([](double e) { return std::clamp(inverse_logit(e), 1e-300, 1 - 1e-16); });
}

}  // namespace

GlmFit fit_binomial_glm(const Design& design, std::span<const double> successes, std::span<const double> trials,
                        const GlmOptions& options) {
  const std::size_t rows = successes.size();
  if (trials.size() != rows) throw Error(Errc::SizeMismatch, "successes and trials differ in length");
  for (const auto& c : design.columns) {
    if (c.size() != rows) throw Error(Errc::SizeMismatch, "design rows do not match the responses");
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!(successes[i] >= 0 && successes[i] <= trials[i])) {
      throw Error(Errc::InvalidArgument, "need 0 <= successes <= trials");
    }
    if (trials[i] > 0) keep.push_back(i);
  }

  const Eigen::Index n = static_cast<Eigen::Index>(keep.size());
  const Eigen::Index p = static_cast<Eigen::Index>(design.columns.size()) + (options.intercept ? 1 : 0);
  if (p == 0) throw Error(Errc::RankDeficientDesign, "model has no terms");
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n), m(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::size_t i = keep[r];
    Eigen::Index c = 0;
    if (options.intercept) X(r, c++) = 1.0;
    for (const auto& col : design.columns) X(r, c++) = col[i];
    y[r] = successes[i];
    m[r] = trials[i];
  }
  if (n < p) throw Error(Errc::RankDeficientDesign, "fewer observations than coefficients");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) throw Error(Errc::RankDeficientDesign, "design matrix is rank deficient");

  // Start from the empirical logits.
  Eigen::VectorXd mu = ((y.array() + 0.5) / (m.array() + 1.0)).matrix();
  Eigen::VectorXd eta = mu.unaryExpr([](double v) { return std::log(v / (1 - v)); });
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  auto wls_step = [&](const Eigen::VectorXd& mu_now, const Eigen::VectorXd& eta_now) {
    Eigen::VectorXd w = (m.array() * mu_now.array() * (1 - mu_now.array())).matrix();
    Eigen::VectorXd z = eta_now + ((y - m.cwiseProduct(mu_now)).array() / w.array()).matrix();
    Eigen::VectorXd sw = w.cwiseSqrt();
    return Eigen::VectorXd((sw.asDiagonal() * X).colPivHouseholderQr().solve(sw.cwiseProduct(z)));
  };
  beta = wls_step(mu, eta);
  mu = fitted(X, beta);
  double dev = binomial_deviance(y, m, mu);

  GlmFit fit;
  fit.deviance_trace.push_back(dev);
  bool converged = false;
  for (int it = 1; it <= options.max_iterations; ++it) {
    fit.iterations = it;
    Eigen::VectorXd next = wls_step(mu, X * beta);
    Eigen::VectorXd mu_next = fitted(X, next);
    double dev_next = binomial_deviance(y, m, mu_next);
    // Halve only on a real increase, not rounding noise at the optimum.
    for (int half = 0; half < 40 && !(dev_next <= dev + 1e-9 * (1 + dev)); ++half) {
      next = (beta + next) / 2;
      mu_next = fitted(X, next);
      dev_next = binomial_deviance(y, m, mu_next);
    }
    if (!std::isfinite(dev_next)) throw Error(Errc::SeparationDetected, "deviance diverged");
    const double change = (next - beta).cwiseAbs().maxCoeff();
    beta = next;
    mu = mu_next;
    dev = dev_next;
    fit.deviance_trace.push_back(dev);
    if (change < options.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged || (X * beta).cwiseAbs().maxCoeff() > kSeparationEta) {
    throw Error(Errc::SeparationDetected, "coefficients diverge; the outcome is separated by the predictors");
  }

  const Eigen::VectorXd w = (m.array() * mu.array() * (1 - mu.array())).matrix();
  const Eigen::MatrixXd info = X.transpose() * w.asDiagonal() * X;
  const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::Index c = 0;
  auto push = [&](const std::string& name) {
    GlmTerm t;
    t.name = name;
    t.estimate = beta[c];
    t.std_error = std::sqrt(cov(c, c));
    t.z = t.estimate / t.std_error;
    t.p_value = std::min(1.0, 2 * (1 - normal_cdf(std::fabs(t.z))));
    fit.terms.push_back(t);
    ++c;
  };
  if (options.intercept) push(std::string(kInterceptName));
  for (const auto& name : design.names) push(name);

  fit.residual_deviance = binomial_deviance(y, m, mu);
  const double pooled = options.intercept ? y.sum() / m.sum() : 0.5;
  fit.null_deviance = binomial_deviance(y, m, Eigen::VectorXd::Constant(n, std::clamp(pooled, 1e-300, 1 - 1e-16)));
  double loglik = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    loglik += std::lgamma(m[i] + 1) - std::lgamma(y[i] + 1) - std::lgamma(m[i] - y[i] + 1);
    if (y[i] > 0) loglik += y[i] * std::log(mu[i]);
    if (m[i] - y[i] > 0) loglik += (m[i] - y[i]) * std::log(1 - mu[i]);
  }
  fit.aic = -2 * loglik + 2 * static_cast<double>(p);
  fit.observations = static_cast<int>(n);
  fit.df_null = static_cast<double>(n - (options.intercept ? 1 : 0));
  fit.df_residual = static_cast<double>(n - p);
  return fit;
}

double predict(const GlmFit& fit, std::span<const double> row) {
  double eta = 0;
  std::size_t k = 0;
  for (const auto& t : fit.terms) {
    if (t.name == kInterceptName) {
      eta += t.estimate;
    } else {
      if (k >= row.size()) throw Error(Errc::SizeMismatch, "row is shorter than the model");
      eta += t.estimate * row[k++];
    }
  }
  if (k != row.size()) throw Error(Errc::SizeMismatch, "row is longer than the model");
  return inverse_logit(eta);
}

std::vector<double> standardize(std::span<const double> column) {
  if (column.size() < 2) throw Error(Errc::InsufficientData, "standardizing needs 2 values");
  double mean = 0;
  for (double v : column) mean += v;
  mean /= static_cast<double>(column.size());
  double ss = 0;
  for (double v : column) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(column.size() - 1));
  if (sd == 0) throw Error(Errc::ZeroVariance, "constant predictor");
  std::vector<double> out;
  out.reserve(column.size());
  for (double v : column) out.push_back((v - mean) / sd);
  return out;
}

std::vector<CurvePoint> polynomial_curve(std::span<const double> coefficients, int points) {
  if (points < 2) throw Error(Errc::InvalidArgument, "curve needs 2 points");
  std::vector<CurvePoint> out;
  out.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double x = static_cast<double>(i) / (points - 1);
    double eta = 0;
    for (std::size_t d = coefficients.size(); d-- > 0;) eta = eta * x + coefficients[d];
    out.push_back({x, inverse_logit(eta)});
  }
  return out;
}

std::vector<CurvePoint> breach_response_curve(const GlmFit& fit, int points) {
  std::vector<double> coefs;
  const auto* icpt = fit.term(kInterceptName);
  coefs.push_back(icpt ? icpt->estimate : 0.0);
  for (int d = 1;; ++d) {
    const auto* t = fit.term(d == 1 ? "breach" : "breach^" + std::to_string(d));
    if (!t) break;
    coefs.push_back(t->estimate);
  }
  if (coefs.size() < 2) throw Error(Errc::SchemaError, "fit has no breach terms");
  return polynomial_curve(coefs, points);
}

std::vector<double> interior_maxima(const std::vector<CurvePoint>& curve) {
  std::vector<double> out;
  int rising = 0;  // sign of the last nonzero slope
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double slope = curve[i].p - curve[i - 1].p;
    if (slope == 0) continue;
    if (rising > 0 && slope < 0) out.push_back(curve[i - 1].x);
    rising = slope > 0 ? 1 : -1;
  }
  return out;
}

std::vector<BreachBin> bin_breach_frequencies(std::span<const BreachExposure> exposures, int bins) {
  if (bins < 1) throw Error(Errc::InvalidArgument, "need at least one bin");
  std::vector<BreachBin> all(bins);
  for (int b = 0; b < bins; ++b) all[b].midpoint = (b + 0.5) / bins;
  for (const auto& e : exposures) {
    if (!(e.breach_frequency >= 0 && e.breach_frequency <= 1)) {
      throw Error(Errc::InvalidArgument, "breach frequency must lie in [0, 1]");
    }
    const int b = std::min(bins - 1, static_cast<int>(std::floor(e.breach_frequency * bins)));
    all[b].successes += e.cooperations;
    all[b].trials += e.rounds;
  }
  std::vector<BreachBin> out;
  for (const auto& b : all) {
    if (b.trials > 0) out.push_back(b);
  }
  return out;
}

GlmFit fit_breach_glm(std::span<const BreachExposure> exposures, int degree, int bins) {
  if (degree < 1) throw Error(Errc::InvalidArgument, "degree must be positive");
  const auto binned = bin_breach_frequencies(exposures, bins);
  Design d;
  std::vector<double> s, t;
  for (const auto& b : binned) {
    s.push_back(b.successes);
    t.push_back(b.trials);
  }
  for (int k = 1; k <= degree; ++k) {
    std::vector<double> col;
    for (const auto& b : binned) col.push_back(std::pow(b.midpoint, k));
    d.add(k == 1 ? "breach" : "breach^" + std::to_string(k), std::move(col));
  }
  return fit_binomial_glm(d, s, t);
}

GlmFit questionnaire_glm(const std::vector<ParticipantPerception>& rows, GlmScope scope) {
  std::vector<const ParticipantPerception*> in_scope;
  for (const auto& r : rows) {
    const bool human = r.pairing == "HH";
    if ((scope == GlmScope::HumanHuman) == human) in_scope.push_back(&r);
  }
  if (in_scope.empty()) throw Error(Errc::InsufficientData, "no participants in scope");

  std::vector<std::string_view> names(std::begin(kPerceptionPredictors), std::end(kPerceptionPredictors));
  names.push_back(kNormPredictor);
  Design d;
  for (auto name : names) {
    std::vector<double> col;
    for (const auto* r : in_scope) {
      auto it = r->predictors.find(std::string(name));
      if (it == r->predictors.end()) throw Error(Errc::SchemaError, "missing predictor " + std::string(name));
      col.push_back(it->second);
    }
    try {
      d.add(std::string(name), standardize(col));
    } catch (const Error& e) {
      if (e.code() != Errc::ZeroVariance) throw;
      throw Error(Errc::RankDeficientDesign, "predictor " + std::string(name) + " is constant");
    }
  }
  if (scope == GlmScope::PooledAgents) {
    for (const char* t : {"HC", "HS"}) {
      std::vector<double> col;
      for (const auto* r : in_scope) col.push_back(r->pairing == t ? 1.0 : 0.0);
      d.add(std::string("treatment_") + t, std::move(col));
    }
  }
  std::vector<double> s, t;
  for (const auto* r : in_scope) {
    s.push_back(r->cooperations);
    t.push_back(r->rounds);
  }
  return fit_binomial_glm(d, s, t);
}

}  // namespace pdlab::stats
