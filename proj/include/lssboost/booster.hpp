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

#ifndef LSSBOOST_BOOSTER_HPP_
#define LSSBOOST_BOOSTER_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lssboost/dataset.hpp"
#include "lssboost/families.hpp"
#include "lssboost/learners.hpp"

namespace lssboost {

enum class Stabilization { kNone, kMad };

std::string_view stabilization_name(Stabilization s);
Stabilization parse_stabilization(std::string_view name);

struct BoostControl {
  // One entry per distribution parameter; a single entry is broadcast.
  std::vector<int> mstop = {100};
  std::vector<double> nu = {0.1};
  bool trace = false;
  Stabilization stabilization = Stabilization::kNone;

  // Broadcasts to `num_params` entries and checks 0 < nu < 1, mstop >= 1.
  void resolve(std::size_t num_params);
};

// Gradient stabilization. With kMad the vector is divided by
// median_i |u_i - median_j u_j|; a MAD below 1e-10 falls back to the mean
// absolute deviation, and if that is also below 1e-10 u is returned as is.
std::vector<double> stabilize(std::span<const double> u, Stabilization mode);

// As above, with the MAD taken over observations of positive weight only.
std::vector<double> stabilize(std::span<const double> u,
                              std::span<const double> weights,
                              Stabilization mode);

// Everything needed to fit (and refit) a model.
struct BoostProblem {
  FamilyPtr family;
  std::shared_ptr<const Dataset> data;
  std::string response;
  // Candidate learners per parameter in family order. A single list is
  // shared by all parameters.
  std::vector<std::vector<BaseLearnerSpec>> formulas;
  BoostControl control;
  // Empty means unit weights.
  std::vector<double> weights;
};

// One boosting step: learner `learner` of parameter `parameter` was moved by
// `increment` (already multiplied by the step length) in outer iteration
// `iteration` (1-based).
struct LearnerUpdate {
  int iteration = 0;
  std::size_t parameter = 0;
  std::size_t learner = 0;
  Eigen::VectorXd increment;
  double risk = 0;  // training risk right after this step
};

// Training-range summary of a covariate, used for marginal grids.
struct CovariateSummary {
  std::string name;
  ColumnType type = ColumnType::kContinuous;
  double min = 0, max = 0, mean = 0;
  std::string mode;                 // categorical: most frequent level
  std::vector<std::string> levels;  // categorical: sorted levels
};

// Enumerates the (iteration, parameter) steps visited by cyclic boosting up
// to `mstop`, in execution order.
std::vector<std::pair<int, std::size_t>> iteration_path(
    std::span<const int> mstop);

class BoostModel {
 public:
  BoostModel() = default;

  const Family& family() const { return *family_; }
  const FamilyPtr& family_ptr() const { return family_; }
  std::size_t num_params() const { return learners_.size(); }
  const std::vector<std::string>& param_names() const {
    return family_->param_names();
  }
  const std::string& response() const { return response_; }
  const std::vector<std::vector<BaseLearner>>& learners() const {
    return learners_;
  }
  const std::vector<double>& offsets() const { return offsets_; }
  const std::vector<double>& nu() const { return nu_; }
  Stabilization stabilization() const { return stabilization_; }
  const std::vector<double>& weights() const { return weights_; }
  std::uint64_t data_fingerprint() const { return fingerprint_; }
  std::size_t num_rows() const { return weights_.size(); }
  const std::vector<CovariateSummary>& covariates() const {
    return covariates_;
  }
  const CovariateSummary& covariate(std::string_view name) const;

  // Visible per-parameter iteration counts.
  const std::vector<int>& mstop() const { return visible_; }
  // Counts whose path the stored history follows; mstop() is a prefix.
  const std::vector<int>& path_mstop() const { return path_mstop_; }
  // Complete stored history in execution order.
  const std::vector<LearnerUpdate>& history() const { return history_; }
  std::span<const LearnerUpdate> visible_updates() const;

  bool has_data() const { return data_ != nullptr; }
  const Dataset& data() const;
  std::span<const double> response_values() const { return y_; }

  // Moves the model to `new_mstop` (one entry is broadcast). Shrinking to a
  // prefix of the stored path only changes the view; any other target
  // discards steps after the longest common prefix and fits the remainder
  // along the cyclic path, which requires the training data.
  void subset(std::vector<int> new_mstop);

  // Attaches the training data to a deserialized model so fitting can
  // continue. Throws FormatError on a fingerprint mismatch.
  void attach_data(std::shared_ptr<const Dataset> data);

  // Training predictors [k][i] of the visible model.
  std::vector<std::vector<double>> fitted_link() const;

  // Training risk after each visible outer iteration.
  std::vector<double> risk() const;
  double initial_risk() const { return initial_risk_; }

  // Accumulated coefficients [k][j] of the visible model; zero for learners
  // never selected.
  std::vector<std::vector<Eigen::VectorXd>> coefficients() const;

  // Selected learner indices (0-based) per parameter, in order.
  std::vector<std::vector<std::size_t>> selected() const;

  // Free-form string metadata carried through serialization.
  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const {
    return metadata_;
  }

 private:
  friend BoostModel fit(const BoostProblem& problem);
  friend class ModelSerializer;

  void build_workspaces();
  void replay_training_eta();
  void step(int iteration, std::size_t k);
  void print_trace(int iteration, int last_iteration) const;

  FamilyPtr family_;
  std::string response_;
  std::vector<std::vector<BaseLearner>> learners_;
  std::vector<double> offsets_;
  std::vector<double> nu_;
  Stabilization stabilization_ = Stabilization::kNone;
  bool trace_ = false;
  std::vector<double> weights_;
  std::uint64_t fingerprint_ = 0;
  std::vector<CovariateSummary> covariates_;
  double initial_risk_ = 0;

  std::vector<LearnerUpdate> history_;
  std::vector<int> path_mstop_;
  std::vector<int> visible_;
  std::map<std::string, std::string> metadata_;

  // Present only while training data is attached.
  std::shared_ptr<const Dataset> data_;
  std::vector<double> y_;
  std::vector<std::vector<LearnerWorkspace>> workspaces_;
  std::vector<std::vector<double>> eta_;  // at the end of history_
};

// Cyclic component-wise boosting: offsets, then for m = 1..max(mstop) and
// each parameter still below its mstop, one least-squares base-learner step
// on the log-likelihood gradient.
BoostModel fit(const BoostProblem& problem);

// ---------------------------------------------------------------------------
// Selectors, prediction and extraction

// Parameter tokens are names or 1-based indices; empty selects all.
std::vector<std::size_t> select_parameters(
    const BoostModel& model, const std::vector<std::string>& tokens);

// Learner tokens are name substrings or 1-based indices into the parameter's
// learner list; empty selects all. Throws InputError when nothing matches.
std::vector<std::size_t> select_learners(const std::vector<BaseLearner>& list,
                                         const std::vector<std::string>& tokens);

enum class PredictType { kLink, kResponse };

struct PredictionRequest {
  std::vector<std::string> parameters;  // empty: all
  PredictType type = PredictType::kLink;
  // When set, only the matching learners' contributions (without offset)
  // are returned, one column per learner.
  std::optional<std::vector<std::string>> which;
};

struct PredictionColumn {
  std::size_t parameter = 0;
  std::optional<std::size_t> learner;
  std::string label;  // "mu" or "mu:pspline(x)"
  Eigen::VectorXd values;
};

std::vector<PredictionColumn> predict(const BoostModel& model,
                                      const Dataset& newdata,
                                      const PredictionRequest& request = {});

// Distribution parameters [k][i] for each row of `newdata`.
std::vector<std::vector<double>> predict_params(const BoostModel& model,
                                                const Dataset& newdata);

}  // namespace lssboost

#endif  // LSSBOOST_BOOSTER_HPP_
