/*
 * Copyright 2026 The lssboost Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lssboost/families.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/negative_binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include "lssboost/errors.hpp"

namespace lssboost {

namespace bm = boost::math;

std::string_view LinkFunction::name() const {
  switch (kind_) {
    case LinkKind::kIdentity:
      return "identity";
    case LinkKind::kLog:
      return "log";
    case LinkKind::kLogit:
      return "logit";
  }
  return "?";
}

double LinkFunction::param_from_eta(double eta) const {
  switch (kind_) {
    case LinkKind::kIdentity:
      return eta;
    case LinkKind::kLog:
      return std::exp(eta);
    case LinkKind::kLogit:
      if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
      return std::exp(eta) / (1.0 + std::exp(eta));
  }
  return eta;
}

double LinkFunction::eta_from_param(double theta) const {
  switch (kind_) {
    case LinkKind::kIdentity:
      return theta;
    case LinkKind::kLog:
      return std::log(theta);
    case LinkKind::kLogit:
      return std::log(theta) - std::log1p(-theta);
  }
  return theta;
}

double LinkFunction::dparam_deta(double theta) const {
  switch (kind_) {
    case LinkKind::kIdentity:
      return 1.0;
    case LinkKind::kLog:
      return theta;
    case LinkKind::kLogit:
      return theta * (1.0 - theta);
  }
  return 1.0;
}

void Family::check_response(double y) const {
  if (!in_domain(y)) {
    std::ostringstream msg;
    msg << name_ << " family: response " << y << " outside domain "
        << response_domain();
    throw DomainError(msg.str());
  }
}

void Family::params_from_etas(std::span<const double> eta,
                              std::span<double> theta) const {
  for (std::size_t k = 0; k < num_params(); ++k) {
    theta[k] = links_[k].param_from_eta(eta[k]);
  }
}

namespace {

struct Moments {
  double mean = 0;
  double var = 0;
};

Moments weighted_moments(std::span<const double> y,
                         std::span<const double> w) {
  double sw = 0, swy = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sw += w[i];
    swy += w[i] * y[i];
  }
  Moments m;
  m.mean = swy / sw;
  double ss = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - m.mean;
    ss += w[i] * d * d;
  }
  m.var = ss / sw;
  return m;
}

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

class GaussianFamily final : public Family {
 public:
  GaussianFamily()
      : Family("gaussian", {"mu", "sigma"},
               {LinkFunction(LinkKind::kIdentity),
                LinkFunction(LinkKind::kLog)}) {}

  std::string_view response_domain() const override { return "real"; }
  bool in_domain(double y) const override { return std::isfinite(y); }

  double loglik(double y, std::span<const double> t) const override {
    check_response(y);
    const double z = (y - t[0]) / t[1];
    return -kLogSqrt2Pi - std::log(t[1]) - 0.5 * z * z;
  }

  double grad_eta(std::size_t k, double y,
                  std::span<const double> t) const override {
    check_response(y);
    const double r = y - t[0];
    if (k == 0) return r / (t[1] * t[1]);
    return -1.0 + r * r / (t[1] * t[1]);
  }

  double cdf(double y, std::span<const double> t) const override {
    return bm::cdf(bm::normal_distribution<>(t[0], t[1]), y);
  }
  double quantile(double p, std::span<const double> t) const override {
    if (p <= 0) return -std::numeric_limits<double>::infinity();
    if (p >= 1) return std::numeric_limits<double>::infinity();
    return bm::quantile(bm::normal_distribution<>(t[0], t[1]), p);
  }
  double mean(std::span<const double> t) const override { return t[0]; }
  double variance(std::span<const double> t) const override {
    return t[1] * t[1];
  }
  bool scales_with_response(std::size_t) const override { return true; }

  std::vector<double> initial_params(
      std::span<const double> y, std::span<const double> w) const override {
    const Moments m = weighted_moments(y, w);
    return {m.mean, std::max(std::sqrt(m.var), 1e-10)};
  }

  bool closed_form_offset(std::span<const double> y,
                          std::span<const double> w,
                          std::vector<double>& eta) const override {
    const Moments m = weighted_moments(y, w);
    double sd = std::sqrt(m.var);
    if (!(sd >= 1e-10)) {
      warn("gaussian offset: zero weighted variance, sigma floored at 1e-10");
      sd = 1e-10;
    }
    eta = {m.mean, std::log(sd)};
    return true;
  }
};

class GammaFamily final : public Family {
 public:
  GammaFamily()
      : Family("gamma", {"mu", "sigma"},
               {LinkFunction(LinkKind::kLog), LinkFunction(LinkKind::kLog)}) {}

  std::string_view response_domain() const override { return "y > 0"; }
  bool in_domain(double y) const override {
    return std::isfinite(y) && y > 0;
  }

  // Shape sigma, scale mu / sigma.
  double loglik(double y, std::span<const double> t) const override {
    check_response(y);
    const double mu = t[0], s = t[1];
    return s * std::log(s) - s * std::log(mu) + (s - 1.0) * std::log(y) -
           s * y / mu - bm::lgamma(s);
  }

  double grad_eta(std::size_t k, double y,
                  std::span<const double> t) const override {
    check_response(y);
    const double mu = t[0], s = t[1];
    if (k == 0) return s * (y - mu) / mu;
    return s * (std::log(s) + 1.0 - std::log(mu) + std::log(y) - y / mu -
                bm::digamma(s));
  }

  double cdf(double y, std::span<const double> t) const override {
    return bm::cdf(bm::gamma_distribution<>(t[1], t[0] / t[1]), y);
  }
  double quantile(double p, std::span<const double> t) const override {
    if (p <= 0) return 0.0;
    if (p >= 1) return std::numeric_limits<double>::infinity();
    return bm::quantile(bm::gamma_distribution<>(t[1], t[0] / t[1]), p);
  }
  double mean(std::span<const double> t) const override { return t[0]; }
  double variance(std::span<const double> t) const override {
    return t[0] * t[0] / t[1];
  }
  bool scales_with_response(std::size_t k) const override { return k == 0; }

  std::vector<double> initial_params(
      std::span<const double> y, std::span<const double> w) const override {
    const Moments m = weighted_moments(y, w);
    const double shape = m.var > 0 ? m.mean * m.mean / m.var : 1.0;
    return {m.mean, std::clamp(shape, 1e-3, 1e6)};
  }
};

bool is_count(double y) {
  return std::isfinite(y) && y >= 0 && y == std::floor(y);
}

class NegBinFamily final : public Family {
 public:
  NegBinFamily()
      : Family("negbin", {"mu", "sigma"},
               {LinkFunction(LinkKind::kLog), LinkFunction(LinkKind::kLog)}) {}

  std::string_view response_domain() const override {
    return "y in {0, 1, 2, ...}";
  }
  bool in_domain(double y) const override { return is_count(y); }

  double loglik(double y, std::span<const double> t) const override {
    check_response(y);
    const double mu = t[0], s = t[1];
    const double lsm = std::log(s + mu);
    return bm::lgamma(y + s) - bm::lgamma(s) - bm::lgamma(y + 1.0) +
           s * (std::log(s) - lsm) + y * (std::log(mu) - lsm);
  }

  double grad_eta(std::size_t k, double y,
                  std::span<const double> t) const override {
    check_response(y);
    const double mu = t[0], s = t[1];
    if (k == 0) return s * (y - mu) / (s + mu);
    return s * (bm::digamma(y + s) - bm::digamma(s) + std::log(s) + 1.0 -
                std::log(s + mu) - (s + y) / (s + mu));
  }

  double cdf(double y, std::span<const double> t) const override {
    if (y < 0) return 0.0;
    return bm::cdf(dist(t), std::floor(y));
  }

  // Smallest count x with cdf(x) >= p.
  double quantile(double p, std::span<const double> t) const override {
    if (p <= 0) return 0.0;
    if (p >= 1) return std::numeric_limits<double>::infinity();
    using RealPolicy = bm::policies::policy<
        bm::policies::discrete_quantile<bm::policies::real>>;
    const bm::negative_binomial_distribution<double, RealPolicy> real_dist(
        t[1], t[1] / (t[1] + t[0]));
    double x = std::max(0.0, std::floor(bm::quantile(real_dist, p)));
    const auto d = dist(t);
    while (x > 0 && bm::cdf(d, x - 1.0) >= p) x -= 1.0;
    while (bm::cdf(d, x) < p) x += 1.0;
    return x;
  }

  // Inversion by summing the pmf upwards from zero. Falls back to
  // quantile() where the running sum could lose accuracy.
  double sample(Rng& rng, std::span<const double> t) const override {
    const double u = rng.uniform();
    const double mu = t[0], s = t[1];
    const double q = mu / (s + mu);
    double pmf = std::exp(s * std::log(s / (s + mu)));
    if (!(pmf > 1e-200) || u > 1 - 1e-10) return quantile(u, t);
    double cdf = pmf, x = 0;
    while (cdf < u) {
      pmf *= (x + s) / (x + 1) * q;
      x += 1.0;
      cdf += pmf;
      if (pmf == 0) return quantile(u, t);
    }
    return x;
  }
  double mean(std::span<const double> t) const override { return t[0]; }
  double variance(std::span<const double> t) const override {
    return t[0] + t[0] * t[0] / t[1];
  }
  bool scales_with_response(std::size_t) const override { return false; }

  std::vector<double> initial_params(
      std::span<const double> y, std::span<const double> w) const override {
    const Moments m = weighted_moments(y, w);
    const double mu = std::max(m.mean, 1e-10);
    const double size =
        m.var > mu ? mu * mu / (m.var - mu) : 1e3;  // underdispersed: large
    return {mu, std::clamp(size, 1e-3, 1e6)};
  }

 private:
  static bm::negative_binomial_distribution<> dist(std::span<const double> t) {
    return bm::negative_binomial_distribution<>(t[1], t[1] / (t[1] + t[0]));
  }
};

class BetaFamily final : public Family {
 public:
  BetaFamily()
      : Family("beta", {"mu", "phi"},
               {LinkFunction(LinkKind::kLogit),
                LinkFunction(LinkKind::kLog)}) {}

  std::string_view response_domain() const override { return "0 < y < 1"; }
  bool in_domain(double y) const override { return y > 0 && y < 1; }

  double loglik(double y, std::span<const double> t) const override {
    check_response(y);
    const double mu = t[0], phi = t[1];
    const double a = mu * phi, b = (1.0 - mu) * phi;
    return bm::lgamma(phi) - bm::lgamma(a) - bm::lgamma(b) +
           (a - 1.0) * std::log(y) + (b - 1.0) * std::log1p(-y);
  }

  double grad_eta(std::size_t k, double y,
                  std::span<const double> t) const override {
    check_response(y);
    const double mu = t[0], phi = t[1];
    const double a = mu * phi, b = (1.0 - mu) * phi;
    const double ly = std::log(y), l1y = std::log1p(-y);
    if (k == 0) {
      return phi * (ly - l1y - bm::digamma(a) + bm::digamma(b)) * mu *
             (1.0 - mu);
    }
    return phi * (bm::digamma(phi) - mu * bm::digamma(a) -
                  (1.0 - mu) * bm::digamma(b) + mu * ly + (1.0 - mu) * l1y);
  }

  double cdf(double y, std::span<const double> t) const override {
    if (y <= 0) return 0.0;
    if (y >= 1) return 1.0;
    return bm::cdf(dist(t), y);
  }
  double quantile(double p, std::span<const double> t) const override {
    if (p <= 0) return 0.0;
    if (p >= 1) return 1.0;
    return bm::quantile(dist(t), p);
  }
  double mean(std::span<const double> t) const override { return t[0]; }
  double variance(std::span<const double> t) const override {
    return t[0] * (1.0 - t[0]) / (1.0 + t[1]);
  }
  bool scales_with_response(std::size_t) const override { return false; }

  std::vector<double> initial_params(
      std::span<const double> y, std::span<const double> w) const override {
    const Moments m = weighted_moments(y, w);
    const double mu = std::clamp(m.mean, 1e-6, 1.0 - 1e-6);
    double phi = m.var > 0 ? mu * (1.0 - mu) / m.var - 1.0 : 1.0;
    if (!(phi > 0)) phi = 1.0;
    return {mu, std::min(phi, 1e6)};
  }

 private:
  static bm::beta_distribution<> dist(std::span<const double> t) {
    return bm::beta_distribution<>(t[0] * t[1], (1.0 - t[0]) * t[1]);
  }
};

class StudentTFamily final : public Family {
 public:
  StudentTFamily()
      : Family("studentt", {"mu", "sigma", "df"},
               {LinkFunction(LinkKind::kIdentity),
                LinkFunction(LinkKind::kLog), LinkFunction(LinkKind::kLog)}) {}

  std::string_view response_domain() const override { return "real"; }
  bool in_domain(double y) const override { return std::isfinite(y); }

  double loglik(double y, std::span<const double> t) const override {
    check_response(y);
    const double mu = t[0], s = t[1], df = t[2];
    const double z = (y - mu) / s;
    return bm::lgamma(0.5 * (df + 1.0)) - bm::lgamma(0.5 * df) -
           0.5 * std::log(df * std::numbers::pi) - std::log(s) -
           0.5 * (df + 1.0) * std::log1p(z * z / df);
  }

  double grad_eta(std::size_t k, double y,
                  std::span<const double> t) const override {
    check_response(y);
    const double mu = t[0], s = t[1], df = t[2];
    const double r = y - mu;
    const double z2 = (r / s) * (r / s);
    switch (k) {
      case 0:
        return (df + 1.0) * r / (df * s * s + r * r);
      case 1:
        return -1.0 + (df + 1.0) * z2 / (df + z2);
      default:
        return df * (0.5 * bm::digamma(0.5 * (df + 1.0)) -
                     0.5 * bm::digamma(0.5 * df) - 0.5 / df -
                     0.5 * std::log1p(z2 / df) +
                     0.5 * (df + 1.0) * z2 / (df * (df + z2)));
    }
  }

  double cdf(double y, std::span<const double> t) const override {
    return bm::cdf(bm::students_t_distribution<>(t[2]), (y - t[0]) / t[1]);
  }
  double quantile(double p, std::span<const double> t) const override {
    if (p <= 0) return -std::numeric_limits<double>::infinity();
    if (p >= 1) return std::numeric_limits<double>::infinity();
    return t[0] + t[1] * bm::quantile(bm::students_t_distribution<>(t[2]), p);
  }
  double mean(std::span<const double> t) const override {
    return t[2] > 1 ? t[0] : std::numeric_limits<double>::quiet_NaN();
  }
  double variance(std::span<const double> t) const override {
    if (t[2] <= 2) return std::numeric_limits<double>::infinity();
    return t[1] * t[1] * t[2] / (t[2] - 2.0);
  }
  bool scales_with_response(std::size_t k) const override { return k < 2; }

  std::vector<double> initial_params(
      std::span<const double> y, std::span<const double> w) const override {
    const Moments m = weighted_moments(y, w);
    constexpr double kDf = 5.0;
    const double scale = std::sqrt(m.var * (kDf - 2.0) / kDf);
    return {m.mean, std::max(scale, 1e-10), kDf};
  }
};

constexpr double kEtaBound = 30.0;

// Solves sum_i w_i dl/deta_k = 0 along coordinate k with the other
// coordinates fixed. Returns the new eta_k.
double solve_coordinate(const Family& family, std::span<const double> y,
                        std::span<const double> w, std::vector<double>& eta,
                        std::size_t k) {
  std::vector<double> theta(family.num_params());
  auto score = [&](double eta_k) {
    const double saved = eta[k];
    eta[k] = eta_k;
    family.params_from_etas(eta, theta);
    eta[k] = saved;
    double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (w[i] > 0) s += w[i] * family.grad_eta(k, y[i], theta);
    }
    return s;
  };

  const double start = std::clamp(eta[k], -kEtaBound, kEtaBound);
  const double s0 = score(start);
  if (s0 == 0) return start;
  if (!std::isfinite(s0)) {
    throw OffsetError("offset search: non-finite score for parameter " +
                      family.param_names()[k]);
  }
  // Walk uphill with doubling steps until the score changes sign.
  const double dir = s0 > 0 ? 1.0 : -1.0;
  double a = start, fa = s0, step = 0.5;
  double b = start, fb = s0;
  for (;;) {
    b = std::clamp(a + dir * step, -kEtaBound, kEtaBound);
    fb = score(b);
    if (!std::isfinite(fb)) {
      throw OffsetError("offset search: non-finite score for parameter " +
                        family.param_names()[k]);
    }
    if ((fb > 0) != (fa > 0) || fb == 0) break;
    if (std::abs(b) >= kEtaBound) {
      std::ostringstream msg;
      msg << "offset for " << family.param_names()[k]
          << " reached the eta bound " << b << " without a sign change";
      warn(msg.str());
      return b;
    }
    a = b;
    fa = fb;
    step *= 2.0;
  }
  if (fb == 0) return b;
  std::uintmax_t max_iter = 200;
  const auto [lo, hi] = bm::tools::toms748_solve(
      score, std::min(a, b), std::max(a, b), a < b ? fa : fb,
      a < b ? fb : fa,
      [](double l, double h) { return std::abs(h - l) < 1e-13; }, max_iter);
  return 0.5 * (lo + hi);
}

}  // namespace

FamilyPtr gaussian_family() { return std::make_shared<GaussianFamily>(); }
FamilyPtr gamma_family() { return std::make_shared<GammaFamily>(); }
FamilyPtr negbin_family() { return std::make_shared<NegBinFamily>(); }
FamilyPtr beta_family() { return std::make_shared<BetaFamily>(); }
FamilyPtr studentt_family() { return std::make_shared<StudentTFamily>(); }

FamilyPtr make_family(std::string_view name) {
  if (name == "gaussian") return gaussian_family();
  if (name == "gamma") return gamma_family();
  if (name == "negbin") return negbin_family();
  if (name == "beta") return beta_family();
  if (name == "studentt") return studentt_family();
  throw InputError("unknown family '" + std::string(name) + "'");
}

std::vector<std::string> family_names() {
  return {"gaussian", "gamma", "negbin", "beta", "studentt"};
}

std::vector<double> compute_offset(const Family& family,
                                   std::span<const double> y,
                                   std::span<const double> weights) {
  if (y.size() != weights.size()) {
    throw InputError("compute_offset: response and weights differ in length");
  }
  double total = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(weights[i] >= 0) || !std::isfinite(weights[i])) {
      throw InputError("compute_offset: weights must be finite and >= 0");
    }
    family.check_response(y[i]);
    total += weights[i];
  }
  if (!(total > 0)) throw InputError("compute_offset: all weights are zero");

  std::vector<double> eta;
  if (family.closed_form_offset(y, weights, eta)) return eta;

  const std::vector<double> start = family.initial_params(y, weights);
  eta.resize(family.num_params());
  for (std::size_t k = 0; k < eta.size(); ++k) {
    eta[k] = family.link(k).eta_from_param(start[k]);
  }

  constexpr int kMaxCycles = 100;
  double change = 0;
  for (int cycle = 0; cycle < kMaxCycles; ++cycle) {
    change = 0;
    for (std::size_t k = 0; k < eta.size(); ++k) {
      const double updated = solve_coordinate(family, y, weights, eta, k);
      change = std::max(change, std::abs(updated - eta[k]));
      eta[k] = updated;
    }
    if (change < 1e-8) return eta;
  }
  std::ostringstream msg;
  msg << family.name() << " offset did not converge after " << kMaxCycles
      << " cycles (last change " << change << ", eta =";
  for (double e : eta) msg << ' ' << e;
  msg << ')';
  throw OffsetError(msg.str());
}

double weighted_nll(const Family& family, std::span<const double> y,
                    std::span<const double> weights,
                    const std::vector<std::vector<double>>& eta) {
  const std::size_t K = family.num_params();
  std::array<double, 4> e{}, theta{};
  double risk = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(weights[i] > 0)) continue;
    for (std::size_t k = 0; k < K; ++k) e[k] = eta[k][i];
    family.params_from_etas(std::span(e.data(), K), std::span(theta.data(), K));
    risk -= weights[i] * family.loglik(y[i], std::span(theta.data(), K));
  }
  return risk;
}

}  // namespace lssboost
