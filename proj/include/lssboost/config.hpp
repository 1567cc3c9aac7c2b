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

#ifndef LSSBOOST_CONFIG_HPP_
#define LSSBOOST_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lssboost/booster.hpp"
#include "lssboost/dataset.hpp"

namespace lssboost {

struct CvSettings {
  std::vector<int> grid_max;  // empty: the model's mstop
  int grid_min = 20;
  int length_out = 10;
  bool log_scale = true;
  bool dense_mu = true;
  int folds = 25;
  double fraction = 0.5;
};

// Model specification read from a JSON file. Relative adjacency paths are
// resolved against the config file's directory.
struct ModelConfig {
  std::string family = "gaussian";
  std::string response;
  double rescale = 1.0;         // y is multiplied by this before fitting
  std::string weights_column;   // optional
  std::filesystem::path adjacency;  // graph for mrf terms
  // Either one shared list or one list per parameter in family order.
  std::vector<std::vector<BaseLearnerSpec>> formulas;
  BoostControl control;
  std::uint64_t seed = 1;
  std::map<std::string, ColumnType> type_hints;
  CvSettings cv;
};

ModelConfig parse_config(std::string_view json_text,
                         const std::filesystem::path& base_dir = {});
ModelConfig load_config(const std::filesystem::path& path);

// Canonical JSON form; parse_config(config_to_json(c)) reproduces c.
std::string config_to_json(const ModelConfig& config);

// Columns the model reads, in first-use order.
std::vector<std::string> used_columns(const ModelConfig& config);

// Reads the CSV with the config's type hints (mrf and ridge covariates are
// forced categorical), drops rows missing a used column and applies the
// response rescale factor.
std::shared_ptr<const Dataset> load_training_data(
    const ModelConfig& config, const std::filesystem::path& csv,
    IngestReport* report = nullptr);

BoostProblem make_problem(const ModelConfig& config,
                          std::shared_ptr<const Dataset> data);

}  // namespace lssboost

#endif  // LSSBOOST_CONFIG_HPP_
