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

#ifndef LSSBOOST_SERIALIZE_HPP_
#define LSSBOOST_SERIALIZE_HPP_

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "lssboost/booster.hpp"

namespace lssboost {

inline constexpr int kModelFormatVersion = 1;

// Model files are UTF-8 JSON with a fixed field order. Doubles are written
// in shortest round-trip form, so a reloaded model predicts bit-identically.
class ModelSerializer {
 public:
  static std::string to_string(const BoostModel& model);
  // Throws FormatError on a wrong format tag or version.
  static BoostModel from_string(std::string_view text);
};

std::string serialize_model(const BoostModel& model);
void save_model(const BoostModel& model, const std::filesystem::path& path);

// Without `data` the model can predict but not continue fitting. With data,
// the fingerprint is checked and the training state is rebuilt.
BoostModel deserialize_model(std::string_view text,
                             std::shared_ptr<const Dataset> data = nullptr);
BoostModel load_model(const std::filesystem::path& path,
                      std::shared_ptr<const Dataset> data = nullptr);

std::string fingerprint_hex(std::uint64_t fingerprint);

}  // namespace lssboost

#endif  // LSSBOOST_SERIALIZE_HPP_
