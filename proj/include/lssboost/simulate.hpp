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

#ifndef LSSBOOST_SIMULATE_HPP_
#define LSSBOOST_SIMULATE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lssboost/dataset.hpp"

namespace lssboost {

struct CovariateGenerator {
  enum class Kind { kUniform, kNormal, kCategorical };
  std::string name;
  Kind kind = Kind::kUniform;
  double a = 0, b = 1;  // uniform: [a, b]; normal: mean a, sd b
  std::vector<std::string> levels;
};

struct EffectTerm {
  enum class Kind { kLinear, kSin, kLevels };
  Kind kind = Kind::kLinear;
  std::string covariate;
  double coef = 1;   // linear: coef * x; sin: coef * sin(freq * x)
  double freq = 1;
  std::map<std::string, double> values;  // levels: effect per label
};

struct EtaSpec {
  double intercept = 0;
  std::vector<EffectTerm> terms;
};

// Generator for synthetic data: covariates are drawn column by column, then
// y_i from the family with the true predictors.
struct SimulationSpec {
  std::string family = "gaussian";
  std::string response = "y";
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::vector<CovariateGenerator> covariates;
  std::vector<EtaSpec> eta;  // per parameter in family order
};

// JSON form:
// {"family": "gaussian", "n": 500, "seed": 1, "response": "y",
//  "covariates": [{"name": "x1", "dist": "uniform", "min": -1, "max": 1},
//                 {"name": "g", "dist": "categorical", "levels": ["a"]}],
//  "eta": {"mu": {"intercept": 0, "terms": [{"type": "linear",
//          "covariate": "x1", "coef": 2}]}}}
SimulationSpec parse_simulation_spec(std::string_view json_text);

struct SimulationResult {
  Dataset data;
  Dataset truth;  // eta_<param> and <param> per row
};

SimulationResult simulate(const SimulationSpec& spec);

}  // namespace lssboost

#endif  // LSSBOOST_SIMULATE_HPP_
