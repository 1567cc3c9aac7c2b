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

#ifndef LSSBOOST_TUNING_HPP_
#define LSSBOOST_TUNING_HPP_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lssboost/booster.hpp"

namespace lssboost {

// A set of per-parameter stopping vectors, sorted lexicographically and
// without duplicates. Parameter 0 is mu.
struct StopGrid {
  std::vector<std::vector<int>> points;
  std::vector<std::vector<int>> axes;  // sparse axis per parameter
  int min = 20;
  std::vector<int> max;
  int length_out = 10;
  bool log_scale = true;
  bool dense_mu = true;
};

// round(exp(linspace(log min, log max, length_out))) with duplicates removed,
// or round(linspace(min, max, length_out)) when log_scale is false.
std::vector<int> grid_axis(int min, int max, int length_out, bool log_scale);

// Cartesian product of the per-parameter axes. With dense_mu every
// m_mu from max(other coordinates) to max[0] is added for each combination
// of the other axes, since those points lie on the fitting path anyway.
StopGrid make_grid(std::vector<int> max, int min = 20, int length_out = 10,
                   bool log_scale = true, bool dense_mu = true);

// Builds a grid from explicit points (sorted and deduplicated).
StopGrid grid_from_points(std::vector<std::vector<int>> points);

// Subsampling folds: each column puts weight 1 on floor(fraction * n) rows
// drawn without replacement and 0 elsewhere.
struct FoldSet {
  std::size_t n = 0;
  std::vector<std::vector<double>> columns;
  double fraction = 0.5;
  std::uint64_t seed = 0;

  std::size_t size() const { return columns.size(); }
};

FoldSet make_folds(std::size_t n, int B = 25, double fraction = 0.5,
                   std::uint64_t seed = 1);

struct CVResult {
  StopGrid grid;
  std::vector<std::string> param_names;
  // folds x grid points; out-of-bag mean negative log-likelihood.
  Eigen::MatrixXd risk;
  std::vector<bool> failed;  // per fold
  std::vector<std::string> failure_messages;

  // Mean over unmasked folds, one entry per grid point.
  std::vector<double> mean_risk() const;
};

// For every fold, refits `problem` with the fold weights multiplied into its
// base weights and scores each grid point on the out-of-bag rows (fold
// weight 0, positive base weight). Points are visited grouped by their
// non-mu coordinates with mu ascending, so consecutive points share most of
// their path and only the difference is fitted. Folds run on up to `cores`
// threads; the result does not depend on the thread count.
CVResult cv_risk(const BoostProblem& problem, const StopGrid& grid,
                 const FoldSet& folds, unsigned cores = 1);

struct OptimalStop {
  std::vector<int> mstop;
  double risk = 0;
  // True when some coordinate sits at its grid minimum or maximum, where a
  // wider grid might find a lower risk.
  bool on_boundary = false;
};

// Minimizer of the fold-averaged risk; ties go to the smallest total
// iteration count, then to the lexicographically smallest vector.
OptimalStop optimal_mstop(const CVResult& cv);

// fold,mstop_<param>...,oob_risk; masked folds are omitted.
void write_cv_csv(const CVResult& cv, std::ostream& out);
// mstop_<param>... one row per grid point.
void write_grid_csv(const StopGrid& grid,
                    const std::vector<std::string>& param_names,
                    std::ostream& out);

}  // namespace lssboost

#endif  // LSSBOOST_TUNING_HPP_
