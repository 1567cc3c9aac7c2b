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

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerics.

#ifndef LSSBOOST_TESTS_ORACLES_HPP_
#define LSSBOOST_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

// Central difference of f at x with step h.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

// Plain Nelder-Mead minimizer; good enough for smooth low-dimensional
// likelihoods.
inline std::vector<double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double step = 0.5, int iters = 20000,
    double tol = 1e-14) {
  const std::size_t d = x0.size();
  std::vector<std::vector<double>> s(d + 1, x0);
  for (std::size_t i = 0; i < d; ++i) s[i + 1][i] += step;
  std::vector<double> fv(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fv[i] = f(s[i]);
  for (int it = 0; it < iters; ++it) {
    std::vector<std::size_t> o(d + 1);
    std::iota(o.begin(), o.end(), 0);
    std::sort(o.begin(), o.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    auto s2 = s;
    auto f2 = fv;
    for (std::size_t i = 0; i <= d; ++i) {
      s[i] = s2[o[i]];
      fv[i] = f2[o[i]];
    }
    if (std::abs(fv[d] - fv[0]) <= tol * (std::abs(fv[0]) + 1e-300)) {
      double spread = 0;
      for (std::size_t i = 1; i <= d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          spread = std::max(spread, std::abs(s[i][j] - s[0][j]));
        }
      }
      if (spread < 1e-10) break;
    }
    std::vector<double> c(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) c[j] += s[i][j] / d;
    }
    auto along = [&](double t) {
      std::vector<double> p(d);
      for (std::size_t j = 0; j < d; ++j) p[j] = c[j] + t * (s[d][j] - c[j]);
      return p;
    };
    auto xr = along(-1);
    double fr = f(xr);
    if (fr < fv[0]) {
      auto xe = along(-2);
      double fe = f(xe);
      if (fe < fr) {
        s[d] = xe;
        fv[d] = fe;
      } else {
        s[d] = xr;
        fv[d] = fr;
      }
    } else if (fr < fv[d - 1]) {
      s[d] = xr;
      fv[d] = fr;
    } else {
      auto xc = fr < fv[d] ? along(-0.5) : along(0.5);
      double fc = f(xc);
      if (fc < std::min(fr, fv[d])) {
        s[d] = xc;
        fv[d] = fc;
      } else {
        for (std::size_t i = 1; i <= d; ++i) {
          for (std::size_t j = 0; j < d; ++j) {
            s[i][j] = s[0][j] + 0.5 * (s[i][j] - s[0][j]);
          }
          fv[i] = f(s[i]);
        }
      }
    }
  }
  return s[std::min_element(fv.begin(), fv.end()) - fv.begin()];
}

// Cox-de Boor recursion for B-spline i of the given degree.
inline double cox_de_boor(const std::vector<double>& t, std::size_t i,
                          int degree, double x) {
  if (degree == 0) {
    return (t[i] <= x && x < t[i + 1]) ? 1.0 : 0.0;
  }
  double v = 0;
  const double d1 = t[i + degree] - t[i];
  const double d2 = t[i + degree + 1] - t[i + 1];
  if (d1 > 0) v += (x - t[i]) / d1 * cox_de_boor(t, i, degree - 1, x);
  if (d2 > 0) {
    v += (t[i + degree + 1] - x) / d2 * cox_de_boor(t, i + 1, degree - 1, x);
  }
  return v;
}

}  // namespace oracle

#endif  // LSSBOOST_TESTS_ORACLES_HPP_
