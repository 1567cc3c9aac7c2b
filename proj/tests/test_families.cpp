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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lssboost/errors.hpp"
#include "lssboost/families.hpp"
#include "family_oracles.hpp"
#include "oracles.hpp"

using namespace lssboost;
using namespace famoracle;

TEST_CASE("catalog contains the five families with documented links") {
  const auto names = family_names();
  for (const auto& n : kFamilies) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  CHECK_THROWS_AS(make_family("poisson"), InputError);
  auto t = studentt_family();
  CHECK(t->num_params() == 3);
  CHECK(t->param_names() == std::vector<std::string>{"mu", "sigma", "df"});
  CHECK(t->link(0).kind() == LinkKind::kIdentity);
  CHECK(t->link(2).kind() == LinkKind::kLog);
  auto b = beta_family();
  CHECK(b->param_names() == std::vector<std::string>{"mu", "phi"});
  CHECK(b->link(0).kind() == LinkKind::kLogit);
}

TEST_CASE("links invert each other") {
  for (auto kind : {LinkKind::kIdentity, LinkKind::kLog, LinkKind::kLogit}) {
    LinkFunction l(kind);
    for (double eta = -8; eta <= 8; eta += 0.37) {
      CHECK(std::abs(l.eta_from_param(l.param_from_eta(eta)) - eta) <= 1e-12);
    }
  }
  CHECK(LinkFunction(LinkKind::kLog).param_from_eta(-20) > 0);
  const double p = LinkFunction(LinkKind::kLogit).param_from_eta(5);
  CHECK((p > 0 && p < 1));
}

TEST_CASE("log-likelihoods agree with written-out densities") {
  std::mt19937_64 g(11);
  for (const auto& name : kFamilies) {
    auto f = make_family(name);
    for (int i = 0; i < 200; ++i) {
      const Point p = draw_point(name, g);
      const double a = f->loglik(p.y, p.theta);
      const double r = ref_loglik(name, p.y, p.theta);
      CHECK_MESSAGE(std::abs(a - r) <= 1e-9 * (1 + std::abs(r)), name);
    }
  }
}

TEST_CASE("analytic gradients match central differences") {
  std::mt19937_64 g(2026);
  for (const auto& name : kFamilies) {
    auto f = make_family(name);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      const Point p = draw_point(name, g);
      for (std::size_t k = 0; k < f->num_params(); ++k) {
        const double a = f->grad_eta(k, p.y, p.theta);
        const double fd = fd_grad(*f, k, p.y, p.theta);
        if (!(std::abs(a - fd) <= 1e-6 * std::max(1.0, std::abs(a)))) ++bad;
      }
    }
    CHECK_MESSAGE(bad == 0, name);
  }
}

TEST_CASE("gradient examples") {
  auto gs = gaussian_family();
  // y = 2, eta_mu = 1, eta_sigma = log 2
  const std::vector<double> th{1.0, 2.0};
  CHECK(gs->grad_eta(0, 2.0, th) == doctest::Approx(fd_grad(*gs, 0, 2.0, th))
                                        .epsilon(1e-6));
  CHECK(gs->grad_eta(0, 2.0, th) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(gs->grad_eta(0, 0.0, std::vector<double>{0.0, 1.0}) == 0.0);
  CHECK(std::abs(gs->grad_eta(1, 3.5, std::vector<double>{1.5, 2.0})) <
        1e-15);

  auto gm = gamma_family();
  CHECK(std::abs(gm->grad_eta(0, 2.0, std::vector<double>{2.0, 5.0})) < 1e-14);
  const std::vector<double> gt{2.0, 5.0};
  CHECK(gm->grad_eta(1, 1.3, gt) ==
        doctest::Approx(fd_grad(*gm, 1, 1.3, gt)).epsilon(1e-6));

  auto nb = negbin_family();
  CHECK(std::abs(nb->grad_eta(0, 3.0, std::vector<double>{3.0, 2.0})) < 1e-14);

  auto bt = beta_family();
  for (double phi : {0.5, 3.0, 40.0}) {
    CHECK(std::abs(bt->grad_eta(0, 0.5, std::vector<double>{0.5, phi})) <
          1e-12);
  }

  auto st = studentt_family();
  CHECK(st->grad_eta(0, 1.7, std::vector<double>{1.7, 3.0, 5.0}) == 0.0);
  const std::vector<double> tt{0.0, 1.0, 4.0};
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(st->grad_eta(k, 1.0, tt) ==
          doctest::Approx(fd_grad(*st, k, 1.0, tt)).epsilon(1e-6));
  }
}

TEST_CASE("negative binomial zero mass and normalisation") {
  auto nb = negbin_family();
  for (auto [mu, s] : {std::pair{3.0, 2.0}, {0.4, 7.0}, {12.0, 0.6}}) {
    const std::vector<double> th{mu, s};
    CHECK(nb->loglik(0, th) ==
          doctest::Approx(s * std::log(s / (s + mu))).epsilon(1e-13));
    double total = 0;
    for (int y = 0; y < 5000; ++y) total += std::exp(nb->loglik(y, th));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("quantiles are monotone and invert the cdf") {
  std::mt19937_64 g(5);
  for (const auto& name : kFamilies) {
    auto f = make_family(name);
    for (int i = 0; i < 50; ++i) {
      const Point p = draw_point(name, g);
      double prev = -INFINITY;
      for (int j = 1; j <= 99; ++j) {
        const double q = f->quantile(j / 100.0, p.theta);
        CHECK(q >= prev);
        prev = q;
      }
      const double back = f->quantile(f->cdf(p.y, p.theta), p.theta);
      if (name == "negbin") {
        CHECK(back == p.y);
      } else {
        CHECK_MESSAGE(std::abs(back - p.y) <= 1e-8 * std::max(1.0,
                                                              std::abs(p.y)),
                      name << " y=" << p.y);
      }
    }
  }
  auto st = studentt_family();
  CHECK(st->quantile(0.5, std::vector<double>{1.7, 3.0, 5.0}) ==
        doctest::Approx(1.7).epsilon(1e-14));
  auto gs = gaussian_family();
  CHECK(gs->quantile(0.9, std::vector<double>{1.0, 2.0}) ==
        doctest::Approx(1.0 + 2.0 * 1.2815515655446004).epsilon(1e-13));
}

TEST_CASE("sampling is inversion of the quantile function") {
  for (const auto& name : kFamilies) {
    auto f = make_family(name);
    std::vector<std::vector<double>> thetas;
    if (name == "negbin") {
      thetas = {{3, 2}, {12, 0.6}, {0.2, 5}, {400, 3}};
    } else if (name == "beta") {
      thetas = {{0.5, 3}, {0.1, 40}};
    } else if (name == "studentt") {
      thetas = {{0, 1, 4}};
    } else {
      thetas = {{2, 5}};
    }
    for (const auto& t : thetas) {
      Rng a(5), b(5);
      for (int i = 0; i < 2000; ++i) {
        const double u = b.uniform();
        const double x = f->sample(a, t);
        CHECK_MESSAGE(x == f->quantile(u, t), name);
      }
    }
  }
}

TEST_CASE("Monte Carlo moments follow the variance parametrisations") {
  struct Case {
    std::string fam;
    std::vector<double> theta;
    double mean, var;
  };
  const std::vector<Case> cases = {
      {"gamma", {2, 5}, 2, 0.8},
      {"negbin", {3, 2}, 3, 7.5},
      {"beta", {0.5, 3}, 0.5, 0.0625},
      {"gaussian", {1, 2}, 1, 4},
      {"studentt", {1, 2, 6}, 1, 4 * 6.0 / 4.0},
  };
  Rng rng(99);
  const int n = 200000;
  for (const auto& c : cases) {
    auto f = make_family(c.fam);
    CHECK(f->mean(c.theta) == doctest::Approx(c.mean).epsilon(1e-14));
    CHECK(f->variance(c.theta) == doctest::Approx(c.var).epsilon(1e-14));
    std::vector<double> x(n);
    for (auto& v : x) v = f->sample(rng, c.theta);
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double s2 = 0, m4 = 0;
    for (double v : x) {
      s2 += (v - m) * (v - m);
      m4 += std::pow(v - m, 4);
    }
    s2 /= n - 1;
    m4 /= n;
    const double se_mean = std::sqrt(c.var / n);
    const double se_var = std::sqrt((m4 - s2 * s2) / n);
    CHECK_MESSAGE(std::abs(m - c.mean) <= 3 * se_mean, c.fam);
    CHECK_MESSAGE(std::abs(s2 - c.var) <= 3 * se_var, c.fam);
  }
}

TEST_CASE("out-of-domain responses are errors") {
  const std::vector<double> two{2.0, 5.0};
  CHECK_THROWS_AS(gamma_family()->loglik(0.0, two), DomainError);
  CHECK_THROWS_AS(gamma_family()->grad_eta(0, -1.0, two), DomainError);
  CHECK_THROWS_AS(negbin_family()->loglik(1.5, two), DomainError);
  CHECK_THROWS_AS(negbin_family()->loglik(-1.0, two), DomainError);
  const std::vector<double> bp{0.5, 3.0};
  CHECK_THROWS_AS(beta_family()->loglik(0.0, bp), DomainError);
  CHECK_THROWS_AS(beta_family()->loglik(1.0, bp), DomainError);
}

TEST_CASE("gaussian offsets are closed-form") {
  auto f = gaussian_family();
  const std::vector<double> y{-1, 0, 1}, w{1, 1, 1};
  const auto eta = compute_offset(*f, y, w);
  CHECK(std::abs(eta[0]) < 1e-15);
  CHECK(eta[1] == doctest::Approx(std::log(std::sqrt(2.0 / 3.0))).epsilon(
                      1e-14));

  std::vector<std::string> warnings;
  auto old = set_warning_handler(
      [&](std::string_view m) { warnings.emplace_back(m); });
  const std::vector<double> c{4, 4, 4};
  const auto ec = compute_offset(*f, c, w);
  set_warning_handler(old);
  CHECK(ec[0] == 4.0);
  CHECK(ec[1] == doctest::Approx(std::log(1e-10)));
  CHECK(warnings.size() == 1);
}

TEST_CASE("iterative offsets match a joint numeric MLE") {
  std::mt19937_64 g(17);
  for (const auto& name : kFamilies) {
    if (name == "gaussian") continue;
    auto f = make_family(name);
    // Draw from one fixed parameter vector so an interior MLE exists.
    Point base = draw_point(name, g);
    if (name == "studentt") base.theta = {0.5, 1.5, 4.0};
    std::vector<double> y, w;
    // Deterministic sample at evenly spaced probabilities.
    for (int i = 0; i < 300; ++i) {
      y.push_back(f->quantile((i + 0.5) / 300.0, base.theta));
      w.push_back(1.0 + (i % 3));
    }
    const auto eta = compute_offset(*f, y, w);
    auto nll = [&](const std::vector<double>& e) {
      std::vector<double> th(e.size());
      for (std::size_t k = 0; k < e.size(); ++k) {
        th[k] = f->link(k).param_from_eta(e[k]);
      }
      double s = 0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        s -= w[i] * ref_loglik(name, y[i], th);
      }
      return s;
    };
    std::vector<double> start(f->num_params());
    for (std::size_t k = 0; k < start.size(); ++k) {
      start[k] = f->link(k).eta_from_param(base.theta[k]);
    }
    const auto ref = oracle::nelder_mead(nll, start, 0.3);
    for (std::size_t k = 0; k < eta.size(); ++k) {
      CHECK_MESSAGE(std::abs(eta[k] - ref[k]) < 1e-4,
                    name << " k=" << k << " " << eta[k] << " vs " << ref[k]);
    }
    CHECK(nll(eta) <= nll(ref) + 1e-7 * std::abs(nll(ref)));
  }
}

TEST_CASE("gamma offsets recover the generating parameters") {
  std::mt19937_64 g(200);
  std::vector<double> y(200), w(200, 1.0);
  for (auto& v : y) v = std::gamma_distribution<double>(5.0, 2.0 / 5.0)(g);
  auto f = gamma_family();
  const auto eta = compute_offset(*f, y, w);
  CHECK(std::abs(eta[0] - std::log(2.0)) < 0.1);
  CHECK(std::abs(eta[1] - std::log(5.0)) < 0.1);
  auto nll = [&](const std::vector<double>& e) {
    double s = 0;
    for (double v : y) {
      s -= ref_loglik("gamma", v, {std::exp(e[0]), std::exp(e[1])});
    }
    return s;
  };
  const auto ref = oracle::nelder_mead(nll, {0.0, 0.0}, 0.5);
  CHECK(eta[0] == doctest::Approx(ref[0]).epsilon(1e-5));
  CHECK(eta[1] == doctest::Approx(ref[1]).epsilon(1e-5));
}

TEST_CASE("offsets are invariant to row order and weight scale") {
  std::mt19937_64 g(3);
  for (const auto& name : kFamilies) {
    auto f = make_family(name);
    const Point base = draw_point(name, g);
    std::vector<double> y, w;
    for (int i = 0; i < 120; ++i) {
      y.push_back(f->quantile((i + 0.5) / 120.0, base.theta));
      w.push_back(0.5 + (i % 4));
    }
    const auto e1 = compute_offset(*f, y, w);
    std::vector<double> yr(y.rbegin(), y.rend()), wr(w.rbegin(), w.rend());
    for (auto& v : wr) v *= 3.0;
    const auto e2 = compute_offset(*f, yr, wr);
    for (std::size_t k = 0; k < e1.size(); ++k) {
      CHECK_MESSAGE(std::abs(e1[k] - e2[k]) < 1e-7, name);
    }
  }
}
