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

#ifndef LSSBOOST_LEARNERS_HPP_
#define LSSBOOST_LEARNERS_HPP_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "lssboost/dataset.hpp"

namespace lssboost {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Neighbourhood structure of a set of regions. The penalty is the graph
// Laplacian K = D - A.
class MrfGraph {
 public:
  // Throws InputError unless the adjacency is square, symmetric,
  // non-negative and has a zero diagonal.
  MrfGraph(std::vector<std::string> regions, Eigen::MatrixXd adjacency);

  static MrfGraph from_edges(
      const std::vector<std::pair<std::string, std::string>>& edges);

  const std::vector<std::string>& regions() const { return regions_; }
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }
  std::size_t size() const { return regions_.size(); }
  std::optional<std::size_t> index_of(const std::string& region) const;

  Eigen::MatrixXd penalty() const;

 private:
  std::vector<std::string> regions_;
  Eigen::MatrixXd adjacency_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Reads either a square CSV matrix whose first row and column carry region
// labels (the top-left cell is empty) or an edge list with one
// "regionA,regionB" pair per line.
MrfGraph read_adjacency(const std::filesystem::path& path);

enum class LearnerKind { kLinear, kPSpline, kRidgeCategorical, kMrf };

std::string_view learner_kind_name(LearnerKind kind);
LearnerKind parse_learner_kind(std::string_view name);

struct BaseLearnerSpec {
  LearnerKind kind = LearnerKind::kLinear;
  // Empty covariate with kind kLinear is an intercept-only learner.
  std::string covariate;
  bool intercept = true;    // linear
  int knots = 20;           // pspline, interior knots
  int degree = 3;           // pspline
  int diff_order = 2;       // pspline
  double df = 4.0;          // pspline, ridge_categorical, mrf
  std::shared_ptr<const MrfGraph> graph;  // mrf

  std::string name() const;
  // Throws InputError on violated hyperparameter invariants.
  void validate() const;
};

// A base-learner resolved against training data: everything needed to build
// its design on any data set, plus the calibrated smoothing parameter.
struct BaseLearner {
  BaseLearnerSpec spec;
  double lower = 0, upper = 0;        // pspline covariate range
  std::vector<double> knot_vector;    // pspline, extended by degree
  std::vector<std::string> levels;    // ridge_categorical
  double lambda = 0;

  std::string name() const { return spec.name(); }
  std::size_t dim() const;
  bool has_penalty() const { return spec.kind != LearnerKind::kLinear; }

  // n x dim design for `data`. Throws InputError for missing columns,
  // type mismatches and unseen levels or regions.
  SparseMatrix design(const Dataset& data) const;
  Eigen::MatrixXd penalty() const;
};

// Fixes knots, levels and graph indices from the training covariate.
BaseLearner resolve_learner(const BaseLearnerSpec& spec, const Dataset& data);

// Trace of X (X'WX + lambda P)^{-1} X'W.
double hat_trace(const Eigen::MatrixXd& xtwx, const Eigen::MatrixXd& penalty,
                 double lambda);

// Bisection on log(lambda) over [-30, 30] until the hat trace matches
// target_df within 1e-4. Throws CalibrationError when the target is outside
// the attainable range.
double calibrate_lambda(const Eigen::MatrixXd& xtwx,
                        const Eigen::MatrixXd& penalty, double target_df);

struct LearnerFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd fitted;  // X * coefficients on the training rows
  double ssr = 0;          // sum_i w_i (u_i - fitted_i)^2
};

// Training design, penalty and the factorized normal equations of one
// base-learner for a fixed weight vector. Immutable once built.
class LearnerWorkspace {
 public:
  LearnerWorkspace(BaseLearner learner, SparseMatrix design,
                   std::vector<double> weights);

  const BaseLearner& learner() const { return learner_; }
  const SparseMatrix& design() const { return design_; }
  const Eigen::MatrixXd& xtwx() const { return xtwx_; }
  std::span<const double> weights() const { return weights_; }

  // (X'WX + lambda P)^{-1} X'W u, with the weighted residual sum of squares.
  LearnerFit fit(std::span<const double> gradient) const;

 private:
  BaseLearner learner_;
  SparseMatrix design_;
  std::vector<double> weights_;
  Eigen::MatrixXd xtwx_;
  Eigen::LLT<Eigen::MatrixXd> solver_;
};

// Resolves, calibrates lambda to spec.df for penalized kinds and factorizes.
LearnerWorkspace build_workspace(const BaseLearnerSpec& spec,
                                 const Dataset& data,
                                 std::span<const double> weights);

// Rebuilds a workspace for an already resolved learner; lambda is reused.
LearnerWorkspace build_workspace(const BaseLearner& learner,
                                 const Dataset& data,
                                 std::span<const double> weights);

Eigen::VectorXd evaluate_learner(const BaseLearner& learner,
                                 const Eigen::VectorXd& coefficients,
                                 const Dataset& newdata);

// Equidistant knots over [lower, upper] with `degree` extra knots on each
// side; yields knots + degree + 1 basis functions.
std::vector<double> equidistant_knots(double lower, double upper, int knots,
                                      int degree);

// Row of the B-spline basis at x. Outside [lower, upper] the basis is
// extended linearly from the nearest boundary.
Eigen::VectorXd bspline_row(double x, std::span<const double> knot_vector,
                            int degree, double lower, double upper);

// (d - order) x d difference operator.
Eigen::MatrixXd difference_matrix(std::size_t d, int order);

}  // namespace lssboost

#endif  // LSSBOOST_LEARNERS_HPP_
