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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "family_oracles.hpp"
#include "lssboost/booster.hpp"
#include "lssboost/errors.hpp"
#include "lssboost/inference.hpp"
#include "lssboost/serialize.hpp"
#include "lssboost/simulate.hpp"
#include "lssboost/tuning.hpp"
#include "test_util.hpp"

using namespace lssboost;
using testutil::linear;
using testutil::problem_for;
using testutil::pspline;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* name, double limit_s,
            const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (limit_s > 0 && s > limit_s) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(static_cast<int>(limit_s)) +
                " s budget)";
  }
  if (!o.pass) ++failures;
  std::printf("%s %s [%.1f s] %s\n", o.pass ? "PASS" : "FAIL", name, s,
              o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

EffectTerm lin(const std::string& cov, double coef) {
  return {EffectTerm::Kind::kLinear, cov, coef, 1, {}};
}

EffectTerm sine(const std::string& cov, double coef, double freq) {
  return {EffectTerm::Kind::kSin, cov, coef, freq, {}};
}

SimulationSpec uniform_spec(const std::string& family, std::size_t n,
                            std::uint64_t seed, int covariates) {
  SimulationSpec s;
  s.family = family;
  s.n = n;
  s.seed = seed;
  for (int j = 1; j <= covariates; ++j) {
    s.covariates.push_back({"x" + std::to_string(j),
                            CovariateGenerator::Kind::kUniform, -1, 1, {}});
  }
  return s;
}

std::vector<double> link_predictions(const BoostModel& m, const Dataset& d) {
  std::vector<double> out;
  for (const auto& col : predict(m, d)) {
    out.insert(out.end(), col.values.data(),
               col.values.data() + col.values.size());
  }
  return out;
}

double max_abs_diff(const std::vector<double>& a,
                    const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double w = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    w = std::max(w, std::abs(a[i] - b[i]));
  }
  return w;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --- criteria ---------------------------------------------------------------

Outcome gradients() {
  std::mt19937_64 g(4711);
  int bad = 0, total = 0;
  double worst = 0;
  for (const auto& name : famoracle::kFamilies) {
    auto f = make_family(name);
    for (int i = 0; i < 1000; ++i) {
      const auto p = famoracle::draw_point(name, g);
      for (std::size_t k = 0; k < f->num_params(); ++k) {
        const double a = f->grad_eta(k, p.y, p.theta);
        const double fd = famoracle::fd_grad(*f, k, p.y, p.theta);
        const double rel = std::abs(a - fd) / std::max(1.0, std::abs(a));
        worst = std::max(worst, rel);
        ++total;
        if (!(rel <= 1e-6)) ++bad;
      }
    }
  }
  return {bad == 0, std::to_string(total) + " comparisons, " +
                        std::to_string(bad) + " outside 1e-6, worst " +
                        fmt("%.2e", worst)};
}

Outcome variances() {
  struct Case {
    std::string fam;
    std::vector<double> theta;
    double var;
  };
  auto gamma_var = [](double mu, double s) { return mu * mu / s; };
  auto nb_var = [](double mu, double s) { return mu + mu * mu / s; };
  auto beta_var = [](double mu, double phi) {
    return mu * (1 - mu) / (1 + phi);
  };
  const std::vector<Case> cases = {
      {"gamma", {2, 5}, gamma_var(2, 5)},
      {"gamma", {0.7, 0.8}, gamma_var(0.7, 0.8)},
      {"negbin", {3, 2}, nb_var(3, 2)},
      {"negbin", {12, 0.6}, nb_var(12, 0.6)},
      {"beta", {0.5, 3}, beta_var(0.5, 3)},
      {"beta", {0.2, 20}, beta_var(0.2, 20)},
  };
  Rng rng(1907);
  const int n = 1000000;
  std::string detail;
  bool ok = true;
  for (const auto& c : cases) {
    auto f = make_family(c.fam);
    std::vector<double> x(n);
    for (auto& v : x) v = f->sample(rng, c.theta);
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double s2 = 0, m4 = 0;
    for (double v : x) {
      const double d = v - m;
      s2 += d * d;
      m4 += d * d * d * d;
    }
    s2 /= n - 1;
    m4 /= n;
    const double se = std::sqrt((m4 - s2 * s2) / n);
    const double z = (s2 - c.var) / se;
    ok &= std::abs(z) <= 3;
    detail += c.fam + " z=" + fmt("%.2f", z) + " ";
  }
  return {ok, detail};
}

// Joint MLE of the linear Gaussian location-scale model with mean design
// Xm and log-scale design Xs: weighted least squares for the mean
// alternated with Newton steps for the log-scale.
void gaussian_lss_mle(const Eigen::MatrixXd& Xm, const Eigen::MatrixXd& Xs,
                      const Eigen::VectorXd& y, Eigen::VectorXd& beta,
                      Eigen::VectorXd& gamma) {
  beta = Eigen::VectorXd::Zero(Xm.cols());
  gamma = Eigen::VectorXd::Zero(Xs.cols());
  for (int outer = 0; outer < 1000; ++outer) {
    const Eigen::VectorXd w = (-2.0 * (Xs * gamma)).array().exp();
    const Eigen::MatrixXd xtw = Xm.transpose() * w.asDiagonal();
    const Eigen::VectorXd nb = (xtw * Xm).ldlt().solve(xtw * y);
    const Eigen::VectorXd r = y - Xm * nb;
    Eigen::VectorXd ng = gamma;
    for (int it = 0; it < 100; ++it) {
      const Eigen::VectorXd e =
          r.array().square() * (-2.0 * (Xs * ng)).array().exp();
      const Eigen::VectorXd grad =
          Xs.transpose() * (e.array() - 1.0).matrix();
      const Eigen::MatrixXd hess = 2.0 * Xs.transpose() * e.asDiagonal() * Xs;
      const Eigen::VectorXd step = hess.ldlt().solve(grad);
      ng += step;
      if (step.cwiseAbs().maxCoeff() < 1e-14) break;
    }
    const double change = std::max((nb - beta).cwiseAbs().maxCoeff(),
                                   (ng - gamma).cwiseAbs().maxCoeff());
    beta = nb;
    gamma = ng;
    if (change < 1e-13) break;
  }
}

Outcome convergence() {
  auto spec = uniform_spec("gaussian", 500, 2024, 4);
  spec.eta.resize(2);
  spec.eta[0] = {0.5, {lin("x1", 1.0), lin("x2", -0.7)}};
  spec.eta[1] = {0.1, {lin("x3", 0.4), lin("x4", -0.3)}};
  const auto sim = simulate(spec);
  const Dataset& d = sim.data;

  auto prob = problem_for(d, gaussian_family(),
                          {{linear("x1"), linear("x2")},
                           {linear("x3"), linear("x4")}},
                          {5000}, 0.1);
  const BoostModel m = fit(prob);

  // Coefficients read off predictions at the unit points.
  Dataset probe;
  probe.add_continuous("x1", {0, 1, 0, 0, 0});
  probe.add_continuous("x2", {0, 0, 1, 0, 0});
  probe.add_continuous("x3", {0, 0, 0, 1, 0});
  probe.add_continuous("x4", {0, 0, 0, 0, 1});
  const auto cols = predict(m, probe);
  const auto& em = cols[0].values;
  const auto& es = cols[1].values;
  const std::vector<double> boosted = {em(0), em(1) - em(0), em(2) - em(0),
                                       es(0), es(3) - es(0), es(4) - es(0)};

  const Eigen::Index n = static_cast<Eigen::Index>(d.num_rows());
  Eigen::MatrixXd Xm(n, 3), Xs(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    Xm.row(i) << 1, d.numeric("x1")[ui], d.numeric("x2")[ui];
    Xs.row(i) << 1, d.numeric("x3")[ui], d.numeric("x4")[ui];
    y(i) = d.numeric("y")[ui];
  }
  Eigen::VectorXd beta, gamma;
  gaussian_lss_mle(Xm, Xs, y, beta, gamma);
  const std::vector<double> mle = {beta(0),  beta(1),  beta(2),
                                   gamma(0), gamma(1), gamma(2)};
  const double dev = max_abs_diff(boosted, mle);
  return {dev < 1e-2, "max |boosted - MLE| = " + fmt("%.3e", dev)};
}

Outcome selection() {
  int ok_mu = 0, ok_sigma = 0, ok_both = 0;
  const int reps = 100;
  for (int r = 0; r < reps; ++r) {
    auto spec = uniform_spec("gaussian", 400, 5000 + r, 12);
    spec.eta.resize(2);
    spec.eta[0] = {0, {lin("x1", 1.0), lin("x2", -1.0)}};
    spec.eta[1] = {0, {lin("x1", 0.5), lin("x2", -0.5)}};
    const auto sim = simulate(spec);
    std::vector<BaseLearnerSpec> list;
    for (int j = 1; j <= 12; ++j) list.push_back(linear("x" + std::to_string(j)));
    const BoostModel m =
        fit(problem_for(sim.data, gaussian_family(), {list}, {100}));
    const auto sel = m.selected();
    bool good[2];
    for (std::size_t k = 0; k < 2; ++k) {
      bool seen0 = false, seen1 = false, noise = false;
      for (std::size_t j : sel[k]) {
        if (j == 0) {
          seen0 = true;
        } else if (j == 1) {
          seen1 = true;
        } else if (!(seen0 && seen1)) {
          noise = true;
          break;
        }
      }
      good[k] = seen0 && seen1 && !noise;
    }
    ok_mu += good[0];
    ok_sigma += good[1];
    ok_both += good[0] && good[1];
  }
  return {ok_both >= 95,
          std::to_string(ok_both) + "/100 replications (mu " +
              std::to_string(ok_mu) + ", sigma " + std::to_string(ok_sigma) +
              ")"};
}

Outcome monotonicity() {
  struct Case {
    std::string family;
    std::vector<EtaSpec> eta;
  };
  const std::vector<Case> cases = {
      {"gaussian", {{1, {sine("x1", 1, 3)}}, {-0.5, {lin("x2", 0.6)}}}},
      {"gamma", {{0.5, {sine("x1", 0.8, 2)}}, {1, {lin("x2", 0.5)}}}},
      {"negbin", {{1, {lin("x1", 0.7)}}, {0.5, {lin("x2", 0.5)}}}},
      {"beta", {{0, {sine("x1", 1, 2)}}, {2, {lin("x2", 0.5)}}}},
      {"studentt",
       {{0, {lin("x1", 1)}}, {-0.3, {lin("x2", 0.4)}}, {std::log(5.0), {}}}},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    auto spec = uniform_spec(c.family, 400, 77, 2);
    spec.eta = c.eta;
    const auto sim = simulate(spec);
    const BoostModel m = fit(problem_for(
        sim.data, make_family(c.family),
        {{linear(""), pspline("x1"), linear("x2")}}, {500}));
    double prev = m.initial_risk(), worst = -INFINITY;
    for (const auto& u : m.history()) {
      worst = std::max(worst, u.risk - prev);
      prev = u.risk;
    }
    const auto trace = m.risk();
    const bool fam_ok = worst <= 1e-8 && trace.size() == 500;
    ok &= fam_ok;
    detail += c.family + " max rise " + fmt("%.1e", std::max(worst, 0.0)) +
              " ";
  }
  return {ok, detail};
}

Outcome mad() {
  std::mt19937_64 g(13);
  std::normal_distribution<double> N(0, 1);
  double worst = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 50 + 17 * rep;
    std::vector<double> u(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = N(g) * std::exp(N(g)) + 3;
      w[i] = i % 5 == 0 ? 0.0 : 1.0;
    }
    for (int weighted = 0; weighted < 2; ++weighted) {
      const auto s = weighted ? stabilize(u, w, Stabilization::kMad)
                              : stabilize(u, Stabilization::kMad);
      std::vector<double> kept;
      for (std::size_t i = 0; i < n; ++i) {
        if (!weighted || w[i] > 0) kept.push_back(s[i]);
      }
      const double med = median(kept);
      std::vector<double> dev;
      for (double v : kept) dev.push_back(std::abs(v - med));
      worst = std::max(worst, std::abs(median(dev) - 1));
    }
  }
  const auto sim = testutil::gaussian_data(300, 8);
  auto prob = problem_for(sim.data, gaussian_family(),
                          {{linear("x1"), linear("x2"), linear("x3")}},
                          {100});
  const auto plain = fit(prob).risk();
  prob.control.stabilization = Stabilization::kMad;
  const auto stab = fit(prob).risk();
  double gap = 0;
  for (std::size_t m = 0; m < plain.size(); ++m) {
    gap = std::max(gap, std::abs(plain[m] - stab[m]));
  }
  return {worst <= 1e-12 && gap > 1e-6,
          "max |MAD - 1| = " + fmt("%.1e", worst) +
              ", max trace difference " + fmt("%.3g", gap)};
}

Outcome grid() {
  const std::vector<int> expect = {20, 29, 41, 58, 84, 120, 171, 245, 350, 500};
  const auto axis = grid_axis(20, 500, 10, true);
  const auto g = make_grid({500, 500}, 20, 10, true, true);
  bool all = true;
  for (int s : axis) {
    for (int m = std::max(20, s); m <= 500; ++m) {
      all &= std::binary_search(g.points.begin(), g.points.end(),
                                std::vector<int>{m, s});
    }
  }
  const bool has = std::find(g.points.begin(), g.points.end(),
                             std::vector<int>{193, 41}) != g.points.end();
  return {axis == expect && all && has,
          std::string("axis ") + (axis == expect ? "exact" : "differs") +
              ", dense rows " + (all ? "complete" : "incomplete") +
              ", (193, 41) " + (has ? "present" : "missing") + ", " +
              std::to_string(g.points.size()) + " points"};
}

Outcome cv() {
  const auto sim = testutil::gaussian_data(200, 21);
  const auto prob = problem_for(
      sim.data, gaussian_family(),
      {{linear(""), linear("x1"), linear("x2"), linear("x3")}}, {60});
  const auto folds = make_folds(200, 6, 0.5, 1907);
  const auto big = make_grid({60, 60}, 10, 4, true, true);
  const auto serial = cv_risk(prob, big, folds, 1);
  const auto parallel = cv_risk(prob, big, folds, 4);
  const bool same = serial.risk == parallel.risk;

  std::vector<std::vector<int>> some;
  for (std::size_t j = 0; j < big.points.size(); j += 3) {
    some.push_back(big.points[j]);
  }
  const auto small = cv_risk(prob, grid_from_points(some), folds, 2);
  bool nested = true;
  for (std::size_t j = 0; j < some.size(); ++j) {
    const auto at = std::find(big.points.begin(), big.points.end(), some[j]) -
                    big.points.begin();
    nested &= small.risk.col(static_cast<Eigen::Index>(j)) ==
              serial.risk.col(at);
  }

  // Refit-and-score oracle for one point.
  const std::vector<int> point = {25, 15};
  const auto one = cv_risk(prob, grid_from_points({point}), folds, 1);
  double worst = 0;
  const auto y = sim.data.numeric("y");
  for (std::size_t b = 0; b < folds.size(); ++b) {
    auto p = prob;
    p.control.mstop = point;
    p.weights = folds.columns[b];
    const BoostModel m = fit(p);
    std::vector<std::size_t> oob;
    for (std::size_t i = 0; i < 200; ++i) {
      if (folds.columns[b][i] == 0) oob.push_back(i);
    }
    const Dataset held = sim.data.select_rows(oob);
    const auto theta = predict_params(m, held);
    double nll = 0;
    for (std::size_t r = 0; r < oob.size(); ++r) {
      nll -= famoracle::ref_loglik("gaussian", y[oob[r]],
                                   {theta[0][r], theta[1][r]});
    }
    nll /= static_cast<double>(oob.size());
    worst = std::max(worst,
                     std::abs(nll - one.risk(static_cast<Eigen::Index>(b), 0)));
  }
  return {same && nested && worst <= 1e-10,
          std::string("serial vs 4 threads ") +
              (same ? "identical" : "differ") + ", nested grids " +
              (nested ? "identical" : "differ") + ", oracle deviation " +
              fmt("%.1e", worst)};
}

Outcome subset() {
  const auto sim = testutil::gaussian_data(300, 5);
  auto prob = problem_for(
      sim.data, gaussian_family(),
      {{linear(""), pspline("x1"), linear("x2"), linear("x3")}}, {40});
  BoostModel m = fit(prob);
  m.subset({10, 20});
  prob.control.mstop = {10, 20};
  const BoostModel fresh = fit(prob);
  const bool same =
      link_predictions(m, sim.data) == link_predictions(fresh, sim.data);

  prob.control.mstop = {50, 50};
  BoostModel full = fit(prob);
  const auto before = link_predictions(full, sim.data);
  full.subset({10, 20});
  full.subset({50, 50});
  const double dev = max_abs_diff(before, link_predictions(full, sim.data));
  return {same && dev < 1e-12,
          std::string("subset vs fresh fit ") +
              (same ? "identical" : "differ") + ", round trip deviation " +
              fmt("%.1e", dev)};
}

Outcome intervals() {
  auto spec = uniform_spec("gaussian", 1500, 31, 1);
  spec.eta.resize(2);
  spec.eta[0] = {1, {sine("x1", 1, 2)}};
  spec.eta[1] = {-0.5, {lin("x1", 0.7)}};
  const auto train = simulate(spec);
  const BoostModel m = fit(problem_for(
      train.data, gaussian_family(), {{linear(""), pspline("x1")}}, {400}));

  // Quantile form of the Gaussian intervals.
  const auto table = predint(m, "x1", {0.8, 0.9}, 200);
  Dataset g;
  g.add_continuous("x1", table.grid);
  const auto theta = predict_params(m, g);
  double zdev = 0;
  const double z80 = 1.281552, z90 = 1.644854;
  for (std::size_t i = 0; i < table.grid.size(); ++i) {
    const double mu = theta[0][i], s = theta[1][i];
    zdev = std::max({zdev, std::abs(table.rows.median[i] - mu) / s,
                     std::abs(table.rows.bands[0].lower[i] - (mu - z80 * s)) / s,
                     std::abs(table.rows.bands[0].upper[i] - (mu + z80 * s)) / s,
                     std::abs(table.rows.bands[1].lower[i] - (mu - z90 * s)) / s,
                     std::abs(table.rows.bands[1].upper[i] - (mu + z90 * s)) / s});
  }
  // The quoted z values carry six decimals.
  const bool z_ok = zdev <= 5e-7 && table.nested();

  spec.n = 10000;
  spec.seed = 32;
  const auto test = simulate(spec);
  const auto rows = prediction_intervals(m, test.data, {0.8, 0.9});
  const auto y = test.data.numeric("y");
  double cover[2] = {0, 0};
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (int b = 0; b < 2; ++b) {
      cover[b] += y[i] >= rows.bands[b].lower[i] &&
                  y[i] <= rows.bands[b].upper[i];
    }
  }
  cover[0] /= static_cast<double>(y.size());
  cover[1] /= static_cast<double>(y.size());
  const bool cov_ok =
      std::abs(cover[0] - 0.8) <= 0.03 && std::abs(cover[1] - 0.9) <= 0.03;
  return {z_ok && cov_ok,
          "max |bound - (mu +- z sigma)|/sigma = " + fmt("%.1e", zdev) +
              ", coverage 80%: " + fmt("%.4f", cover[0]) +
              ", 90%: " + fmt("%.4f", cover[1])};
}

Outcome serialization() {
  auto spec = uniform_spec("studentt", 300, 41, 3);
  spec.eta.resize(3);
  spec.eta[0] = {0, {lin("x1", 1)}};
  spec.eta[1] = {-0.3, {lin("x2", 0.4)}};
  spec.eta[2] = {std::log(4.0), {}};
  const auto sim = simulate(spec);
  const auto data = std::make_shared<const Dataset>(sim.data);
  auto prob = problem_for(
      sim.data, studentt_family(),
      {{linear(""), pspline("x1"), linear("x2"), linear("x3")}}, {30});
  const BoostModel m = fit(prob);
  const std::string text = serialize_model(m);
  const BoostModel back = deserialize_model(text);
  const bool preds =
      link_predictions(m, sim.data) == link_predictions(back, sim.data);
  const bool bytes = serialize_model(back) == text;

  BoostModel cont = deserialize_model(text, data);
  cont.subset({60, 60, 60});
  prob.control.mstop = {60};
  const BoostModel whole = fit(prob);
  const bool same_preds =
      link_predictions(cont, sim.data) == link_predictions(whole, sim.data);
  const bool same_file = serialize_model(cont) == serialize_model(whole);
  return {preds && bytes && same_preds && same_file,
          std::string("round trip predictions ") +
              (preds ? "bitwise equal" : "differ") + ", file " +
              (bytes ? "stable" : "changes") + ", continued fit " +
              (same_preds && same_file ? "equals" : "differs from") +
              " uninterrupted fit"};
}

}  // namespace

int main() {
  set_warning_handler([](std::string_view) {});
  report("gradient_correctness", 30, gradients);
  report("variance_parametrizations", 60, variances);
  report("convergence_to_mle", 120, convergence);
  report("variable_selection", 300, selection);
  report("risk_monotonicity", 0, monotonicity);
  report("mad_stabilization", 0, mad);
  report("grid_construction", 0, grid);
  report("cv_determinism_and_paths", 0, cv);
  report("subset_replay", 0, subset);
  report("prediction_intervals", 0, intervals);
  report("serialization", 0, serialization);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
