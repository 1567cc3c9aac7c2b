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

#ifndef LSSBOOST_INFERENCE_HPP_
#define LSSBOOST_INFERENCE_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lssboost/booster.hpp"
#include "lssboost/dataset.hpp"

namespace lssboost {

// Response-scale bounds at probabilities (1 - level) / 2 and (1 + level) / 2.
struct IntervalBand {
  double level = 0;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct IntervalRows {
  std::vector<double> median;
  std::vector<IntervalBand> bands;  // sorted by level
};

// Conditional quantile intervals for each row of `newdata`.
IntervalRows prediction_intervals(const BoostModel& model,
                                  const Dataset& newdata,
                                  std::vector<double> levels);

// Grid over the training range of `which` with every other model covariate
// fixed at its training mean (continuous) or mode (categorical). The
// returned pairs describe the fixed values.
Dataset marginal_grid(const BoostModel& model, const std::string& which,
                      int grid_points,
                      std::vector<std::pair<std::string, std::string>>* fixed =
                          nullptr);

struct PredictionIntervalTable {
  std::string covariate;
  std::vector<double> grid;
  IntervalRows rows;
  std::vector<std::pair<std::string, std::string>> fixed;

  // Every narrower band lies inside every wider one, and each band
  // contains the median.
  bool nested() const;
};

PredictionIntervalTable predint(const BoostModel& model,
                                const std::string& which,
                                std::vector<double> levels,
                                int grid_points = 150);

struct PartialEffectTable {
  std::size_t parameter = 0;
  std::string param_name;
  std::size_t learner = 0;
  std::string learner_name;
  std::string covariate;  // empty for the intercept
  ColumnType type = ColumnType::kContinuous;
  std::vector<double> x;            // continuous grid
  std::vector<std::string> levels;  // categorical grid
  Eigen::VectorXd effect;           // link scale, no offset
  bool selected = false;
};

// One table per selected (parameter, learner): continuous covariates on an
// equidistant grid over the training range, categorical ones at their
// levels (all graph regions for mrf learners).
std::vector<PartialEffectTable> partial_effects(
    const BoostModel& model, const std::vector<std::string>& parameters,
    const std::vector<std::string>& learners, int grid_points = 150);

struct RegionSummary {
  std::size_t parameter = 0;
  std::string param_name;
  std::vector<std::string> regions;
  std::vector<double> value;
  std::vector<std::size_t> count;  // observations behind each value
};

// Summed contribution of the mrf and ridge learners on `region` for each
// selected parameter. With `aggregate` the values are per-region means over
// the rows of `data` (regions without rows are evaluated directly and get
// count 0); otherwise one entry per row. `response_scale` applies the
// inverse link to the contribution.
std::vector<RegionSummary> region_summary(
    const BoostModel& model, const Dataset& data, const std::string& region,
    const std::vector<std::string>& parameters, bool response_scale,
    bool aggregate = true);

}  // namespace lssboost

#endif  // LSSBOOST_INFERENCE_HPP_
