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

#include "lssboost/tuning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "lssboost/dataset.hpp"
#include "lssboost/errors.hpp"
#include "lssboost/random.hpp"

namespace lssboost {

std::vector<int> grid_axis(int min, int max, int length_out, bool log_scale) {
  if (min < 1) throw InputError("grid minimum must be >= 1");
  if (max < min) throw InputError("grid maximum must be >= the minimum");
  if (length_out < 2) throw InputError("grid length must be >= 2");
  std::vector<int> axis;
  const double lo = log_scale ? std::log(min) : min;
  const double hi = log_scale ? std::log(max) : max;
  for (int i = 0; i < length_out; ++i) {
    const double t = lo + (hi - lo) * i / (length_out - 1);
    const auto v = static_cast<int>(std::lround(log_scale ? std::exp(t) : t));
    axis.push_back(std::clamp(v, min, max));
  }
  axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  if (axis.empty()) throw InputError("empty grid axis");
  return axis;
}

namespace {

void sort_unique(std::vector<std::vector<int>>& points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
}

}  // namespace

StopGrid make_grid(std::vector<int> max, int min, int length_out,
                   bool log_scale, bool dense_mu) {
  if (max.empty()) throw InputError("grid needs at least one maximum");
  StopGrid g;
  g.min = min;
  g.max = max;
  g.length_out = length_out;
  g.log_scale = log_scale;
  g.dense_mu = dense_mu;
  for (int m : max) g.axes.push_back(grid_axis(min, m, length_out, log_scale));

  const std::size_t K = max.size();
  std::vector<std::size_t> idx(K, 0);
  for (;;) {
    std::vector<int> p(K);
    for (std::size_t k = 0; k < K; ++k) p[k] = g.axes[k][idx[k]];
    g.points.push_back(p);
    if (dense_mu && idx[0] == 0) {
      int from = min;
      for (std::size_t k = 1; k < K; ++k) from = std::max(from, p[k]);
      for (int m = from; m <= max[0]; ++m) {
        p[0] = m;
        g.points.push_back(p);
      }
    }
    std::size_t k = 0;
    while (k < K && ++idx[k] == g.axes[k].size()) idx[k++] = 0;
    if (k == K) break;
  }
  sort_unique(g.points);
  return g;
}

StopGrid grid_from_points(std::vector<std::vector<int>> points) {
  if (points.empty()) throw InputError("grid needs at least one point");
  const std::size_t K = points.front().size();
  StopGrid g;
  g.dense_mu = false;
  g.max.assign(K, 0);
  g.min = points.front().front();
  g.axes.resize(K);
  for (const auto& p : points) {
    if (p.size() != K) throw InputError("grid points differ in length");
    for (std::size_t k = 0; k < K; ++k) {
      if (p[k] < 1) throw InputError("grid points must be >= 1");
      g.max[k] = std::max(g.max[k], p[k]);
      g.min = std::min(g.min, p[k]);
      g.axes[k].push_back(p[k]);
    }
  }
  for (auto& a : g.axes) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  g.length_out = 0;
  g.log_scale = false;
  sort_unique(points);
  g.points = std::move(points);
  return g;
}

FoldSet make_folds(std::size_t n, int B, double fraction, std::uint64_t seed) {
  if (n < 20) throw InputError("folds need at least 20 observations");
  if (B < 2) throw InputError("at least 2 folds are required");
  if (!(fraction > 0 && fraction <= 0.9)) {
    throw InputError("fold fraction must lie in (0, 0.9] so that at least "
                     "10% of the rows are out of bag");
  }
  const auto take = static_cast<std::size_t>(std::floor(fraction * n));
  if (take < 1) throw InputError("fold fraction leaves no in-bag rows");
  FoldSet f;
  f.n = n;
  f.fraction = fraction;
  f.seed = seed;
  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  for (int b = 0; b < B; ++b) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    // Partial Fisher-Yates: the first `take` slots are a uniform sample.
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + rng.index(n - i);
      std::swap(perm[i], perm[j]);
    }
    std::vector<double> col(n, 0.0);
    for (std::size_t i = 0; i < take; ++i) col[perm[i]] = 1.0;
    f.columns.push_back(std::move(col));
  }
  return f;
}

std::vector<double> CVResult::mean_risk() const {
  std::vector<double> out(static_cast<std::size_t>(risk.cols()), 0.0);
  std::size_t used = 0;
  for (Eigen::Index b = 0; b < risk.rows(); ++b) {
    if (failed[static_cast<std::size_t>(b)]) continue;
    ++used;
    for (Eigen::Index g = 0; g < risk.cols(); ++g) {
      out[static_cast<std::size_t>(g)] += risk(b, g);
    }
  }
  for (double& v : out) v /= static_cast<double>(used);
  return out;
}

namespace {

struct FoldOutcome {
  std::vector<double> risk;
  std::string error;
};

FoldOutcome run_fold(const BoostProblem& problem,
                     const std::vector<std::size_t>& order,
                     const StopGrid& grid, const std::vector<double>& base,
                     const std::vector<double>& fold) {
  FoldOutcome out;
  out.risk.assign(grid.points.size(), 0.0);
  const std::size_t n = base.size();
  BoostProblem p = problem;
  p.control.trace = false;
  p.weights.resize(n);
  std::vector<double> oob(n, 0.0);
  std::size_t n_oob = 0;
  for (std::size_t i = 0; i < n; ++i) {
    p.weights[i] = base[i] * fold[i];
    if (base[i] > 0 && fold[i] == 0) {
      oob[i] = 1.0;
      ++n_oob;
    }
  }
  if (n_oob == 0) {
    out.error = "fold has no out-of-bag observations";
    return out;
  }
  try {
    p.control.mstop = grid.points[order.front()];
    BoostModel model = fit(p);
    const auto y = model.response_values();
    for (std::size_t g : order) {
      model.subset(grid.points[g]);
      const double r =
          weighted_nll(model.family(), y, oob, model.fitted_link()) /
          static_cast<double>(n_oob);
      if (!std::isfinite(r)) {
        out.error = "non-finite out-of-bag risk";
        return out;
      }
      out.risk[g] = r;
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

CVResult cv_risk(const BoostProblem& problem, const StopGrid& grid,
                 const FoldSet& folds, unsigned cores) {
  if (!problem.data) throw InputError("cross-validation needs data");
  if (grid.points.empty()) throw InputError("empty stopping grid");
  const std::size_t n = problem.data->num_rows();
  if (folds.n != n) {
    throw InputError("fold matrix has " + std::to_string(folds.n) +
                     " rows but the data has " + std::to_string(n));
  }
  const std::size_t K = problem.family->num_params();
  for (const auto& pt : grid.points) {
    if (pt.size() != K) {
      throw InputError("grid points need one entry per parameter");
    }
  }
  std::vector<double> base = problem.weights;
  if (base.empty()) base.assign(n, 1.0);
  if (base.size() != n) throw InputError("weight vector length mismatch");

  // Group by the non-mu coordinates, then mu ascending.
  std::vector<std::size_t> order(grid.points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = grid.points[a];
    const auto& pb = grid.points[b];
    if (!std::equal(pa.begin() + 1, pa.end(), pb.begin() + 1)) {
      return std::lexicographical_compare(pa.begin() + 1, pa.end(),
                                          pb.begin() + 1, pb.end());
    }
    return pa[0] < pb[0];
  });

  const std::size_t B = folds.size();
  std::vector<FoldOutcome> outcomes(B);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b; (b = next.fetch_add(1)) < B;) {
      outcomes[b] = run_fold(problem, order, grid, base, folds.columns[b]);
    }
  };
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(cores, 1u), B));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  CVResult cv;
  cv.grid = grid;
  cv.param_names = problem.family->param_names();
  cv.risk.resize(static_cast<Eigen::Index>(B),
                 static_cast<Eigen::Index>(grid.points.size()));
  cv.failed.assign(B, false);
  cv.failure_messages.assign(B, "");
  std::size_t failures = 0;
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t g = 0; g < grid.points.size(); ++g) {
      cv.risk(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(g)) =
          outcomes[b].risk[g];
    }
    if (!outcomes[b].error.empty()) {
      cv.failed[b] = true;
      cv.failure_messages[b] = outcomes[b].error;
      cv.risk.row(static_cast<Eigen::Index>(b)).setConstant(std::nan(""));
      ++failures;
      warn("fold " + std::to_string(b + 1) + " failed and is ignored: " +
           outcomes[b].error);
    }
  }
  if (failures == B) {
    throw NumericError("all cross-validation folds failed; first error: " +
                       outcomes.front().error);
  }
  return cv;
}

OptimalStop optimal_mstop(const CVResult& cv) {
  const auto mean = cv.mean_risk();
  const auto& pts = cv.grid.points;
  if (pts.empty()) throw InputError("empty stopping grid");
  auto total = [](const std::vector<int>& p) {
    return std::accumulate(p.begin(), p.end(), 0LL);
  };
  std::size_t best = pts.size();
  for (std::size_t g = 0; g < pts.size(); ++g) {
    if (!std::isfinite(mean[g])) continue;
    if (best == pts.size() || mean[g] < mean[best]) {
      best = g;
    } else if (mean[g] == mean[best]) {
      const auto tg = total(pts[g]);
      const auto tb = total(pts[best]);
      if (tg < tb || (tg == tb && pts[g] < pts[best])) best = g;
    }
  }
  if (best == pts.size()) throw NumericError("no finite cross-validated risk");

  OptimalStop o;
  o.mstop = pts[best];
  o.risk = mean[best];
  for (std::size_t k = 0; k < o.mstop.size(); ++k) {
    int lo = pts.front()[k], hi = pts.front()[k];
    for (const auto& p : pts) {
      lo = std::min(lo, p[k]);
      hi = std::max(hi, p[k]);
    }
    if (o.mstop[k] == lo || o.mstop[k] == hi) o.on_boundary = true;
  }
  return o;
}

void write_cv_csv(const CVResult& cv, std::ostream& out) {
  out << "fold";
  for (const auto& name : cv.param_names) out << ",mstop_" << name;
  out << ",oob_risk\n";
  for (Eigen::Index b = 0; b < cv.risk.rows(); ++b) {
    if (cv.failed[static_cast<std::size_t>(b)]) continue;
    for (std::size_t g = 0; g < cv.grid.points.size(); ++g) {
      out << b + 1;
      for (int m : cv.grid.points[g]) out << ',' << m;
      out << ','
          << format_double(cv.risk(b, static_cast<Eigen::Index>(g))) << '\n';
    }
  }
}

void write_grid_csv(const StopGrid& grid,
                    const std::vector<std::string>& param_names,
                    std::ostream& out) {
  for (std::size_t k = 0; k < param_names.size(); ++k) {
    out << (k ? "," : "") << "mstop_" << param_names[k];
  }
  out << '\n';
  for (const auto& p : grid.points) {
    for (std::size_t k = 0; k < p.size(); ++k) out << (k ? "," : "") << p[k];
    out << '\n';
  }
}

}  // namespace lssboost
