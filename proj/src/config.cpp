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

#include "lssboost/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lssboost/errors.hpp"

namespace lssboost {

using Json = nlohmann::ordered_json;

namespace {

void check_keys(const Json& obj, std::string_view where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    throw InputError(std::string(where) + " must be a JSON object");
  }
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) {
      throw InputError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

BaseLearnerSpec parse_term(const Json& t,
                           const std::shared_ptr<const MrfGraph>& graph) {
  check_keys(t, "formula term",
             {"kind", "covariate", "intercept", "knots", "degree",
              "diff_order", "df"});
  BaseLearnerSpec s;
  s.kind = parse_learner_kind(t.at("kind").get<std::string>());
  s.covariate = t.value("covariate", "");
  s.intercept = t.value("intercept", s.intercept);
  s.knots = t.value("knots", s.knots);
  s.degree = t.value("degree", s.degree);
  s.diff_order = t.value("diff_order", s.diff_order);
  s.df = t.value("df", s.df);
  if (s.kind == LearnerKind::kMrf) {
    if (!graph) throw InputError("mrf term needs an 'adjacency' file");
    s.graph = graph;
  }
  s.validate();
  return s;
}

Json term_json(const BaseLearnerSpec& s) {
  Json t;
  t["kind"] = learner_kind_name(s.kind);
  if (!s.covariate.empty()) t["covariate"] = s.covariate;
  switch (s.kind) {
    case LearnerKind::kLinear:
      t["intercept"] = s.intercept;
      break;
    case LearnerKind::kPSpline:
      t["knots"] = s.knots;
      t["degree"] = s.degree;
      t["diff_order"] = s.diff_order;
      t["df"] = s.df;
      break;
    default:
      t["df"] = s.df;
  }
  return t;
}

template <typename T>
std::vector<T> scalar_or_list(const Json& j, const std::vector<std::string>&
                                                 names) {
  if (j.is_array()) return j.get<std::vector<T>>();
  if (j.is_object()) {
    std::vector<T> out;
    for (const auto& n : names) {
      if (!j.contains(n)) throw InputError("missing entry for parameter " + n);
      out.push_back(j.at(n).get<T>());
    }
    if (j.size() != names.size()) {
      throw InputError("unknown parameter name in control");
    }
    return out;
  }
  return {j.get<T>()};
}

}  // namespace

ModelConfig parse_config(std::string_view json_text,
                         const std::filesystem::path& base_dir) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    check_keys(j, "config",
               {"family", "response", "rescale", "weights", "adjacency",
                "formula", "control", "seed", "types", "cv"});
    ModelConfig c;
    c.family = j.value("family", c.family);
    const FamilyPtr family = make_family(c.family);
    const auto& names = family->param_names();
    if (!j.contains("response")) throw InputError("config needs 'response'");
    c.response = j.at("response").get<std::string>();
    c.rescale = j.value("rescale", 1.0);
    if (!(c.rescale > 0) || !std::isfinite(c.rescale)) {
      throw InputError("rescale must be a positive finite number");
    }
    if (c.rescale != 1.0 && !family->scales_with_response(0)) {
      throw InputError("rescaling the response is not supported for the " +
                       c.family + " family");
    }
    c.weights_column = j.value("weights", "");
    c.seed = j.value("seed", c.seed);

    std::shared_ptr<const MrfGraph> graph;
    if (j.contains("adjacency")) {
      std::filesystem::path p = j.at("adjacency").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      c.adjacency = p;
      graph = std::make_shared<const MrfGraph>(read_adjacency(p));
    }

    if (j.contains("types")) {
      for (const auto& [col, t] : j.at("types").items()) {
        const auto v = t.get<std::string>();
        if (v == "continuous") {
          c.type_hints[col] = ColumnType::kContinuous;
        } else if (v == "categorical") {
          c.type_hints[col] = ColumnType::kCategorical;
        } else {
          throw InputError("unknown column type '" + v + "'");
        }
      }
    }

    if (!j.contains("formula")) throw InputError("config needs 'formula'");
    const Json& f = j.at("formula");
    auto parse_list = [&](const Json& arr) {
      if (!arr.is_array() || arr.empty()) {
        throw InputError("a formula must be a non-empty list of terms");
      }
      std::vector<BaseLearnerSpec> list;
      for (const auto& t : arr) list.push_back(parse_term(t, graph));
      return list;
    };
    if (f.is_array()) {
      c.formulas.push_back(parse_list(f));
    } else if (f.is_object()) {
      for (const auto& [key, v] : f.items()) {
        if (std::find(names.begin(), names.end(), key) == names.end()) {
          throw InputError("formula for unknown parameter '" + key + "'");
        }
      }
      for (const auto& n : names) {
        if (!f.contains(n)) throw InputError("no formula for parameter " + n);
        c.formulas.push_back(parse_list(f.at(n)));
      }
    } else {
      throw InputError("'formula' must be a list or an object");
    }

    if (j.contains("control")) {
      const Json& ctl = j.at("control");
      check_keys(ctl, "control", {"mstop", "nu", "stabilization", "trace"});
      if (ctl.contains("mstop")) {
        c.control.mstop = scalar_or_list<int>(ctl.at("mstop"), names);
      }
      if (ctl.contains("nu")) {
        c.control.nu = scalar_or_list<double>(ctl.at("nu"), names);
      }
      c.control.stabilization = parse_stabilization(
          ctl.value("stabilization",
                    std::string(stabilization_name(c.control.stabilization))));
      c.control.trace = ctl.value("trace", false);
    }
    c.control.resolve(names.size());

    if (j.contains("cv")) {
      const Json& cv = j.at("cv");
      check_keys(cv, "cv",
                 {"grid_max", "grid_min", "length_out", "log_scale",
                  "dense_mu", "folds", "fraction"});
      if (cv.contains("grid_max")) {
        c.cv.grid_max = scalar_or_list<int>(cv.at("grid_max"), names);
        if (c.cv.grid_max.size() == 1) {
          c.cv.grid_max.assign(names.size(), c.cv.grid_max.front());
        }
      }
      c.cv.grid_min = cv.value("grid_min", c.cv.grid_min);
      c.cv.length_out = cv.value("length_out", c.cv.length_out);
      c.cv.log_scale = cv.value("log_scale", c.cv.log_scale);
      c.cv.dense_mu = cv.value("dense_mu", c.cv.dense_mu);
      c.cv.folds = cv.value("folds", c.cv.folds);
      c.cv.fraction = cv.value("fraction", c.cv.fraction);
    }
    return c;
  } catch (const Json::exception& e) {
    throw InputError(std::string("invalid config: ") + e.what());
  }
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string config_to_json(const ModelConfig& c) {
  Json j;
  j["family"] = c.family;
  j["response"] = c.response;
  j["rescale"] = c.rescale;
  if (!c.weights_column.empty()) j["weights"] = c.weights_column;
  if (!c.adjacency.empty()) {
    j["adjacency"] = std::filesystem::absolute(c.adjacency).string();
  }
  if (!c.type_hints.empty()) {
    Json t = Json::object();
    for (const auto& [col, type] : c.type_hints) {
      t[col] = column_type_name(type);
    }
    j["types"] = std::move(t);
  }
  const auto names = make_family(c.family)->param_names();
  if (c.formulas.size() == 1) {
    Json arr = Json::array();
    for (const auto& s : c.formulas.front()) arr.push_back(term_json(s));
    j["formula"] = std::move(arr);
  } else {
    Json obj = Json::object();
    for (std::size_t k = 0; k < c.formulas.size(); ++k) {
      Json arr = Json::array();
      for (const auto& s : c.formulas[k]) arr.push_back(term_json(s));
      obj[names[k]] = std::move(arr);
    }
    j["formula"] = std::move(obj);
  }
  j["control"] = {{"mstop", c.control.mstop},
                  {"nu", c.control.nu},
                  {"stabilization",
                   stabilization_name(c.control.stabilization)},
                  {"trace", c.control.trace}};
  j["seed"] = c.seed;
  Json cv;
  if (!c.cv.grid_max.empty()) cv["grid_max"] = c.cv.grid_max;
  cv["grid_min"] = c.cv.grid_min;
  cv["length_out"] = c.cv.length_out;
  cv["log_scale"] = c.cv.log_scale;
  cv["dense_mu"] = c.cv.dense_mu;
  cv["folds"] = c.cv.folds;
  cv["fraction"] = c.cv.fraction;
  j["cv"] = std::move(cv);
  return j.dump(1);
}

std::vector<std::string> used_columns(const ModelConfig& c) {
  std::vector<std::string> cols{c.response};
  auto add = [&](const std::string& name) {
    if (!name.empty() &&
        std::find(cols.begin(), cols.end(), name) == cols.end()) {
      cols.push_back(name);
    }
  };
  add(c.weights_column);
  for (const auto& list : c.formulas) {
    for (const auto& s : list) add(s.covariate);
  }
  return cols;
}

std::shared_ptr<const Dataset> load_training_data(
    const ModelConfig& c, const std::filesystem::path& csv,
    IngestReport* report) {
  IngestOptions opt;
  opt.type_hints = c.type_hints;
  for (const auto& list : c.formulas) {
    for (const auto& s : list) {
      if (s.kind == LearnerKind::kMrf ||
          s.kind == LearnerKind::kRidgeCategorical) {
        opt.type_hints.emplace(s.covariate, ColumnType::kCategorical);
      }
    }
  }
  opt.used_columns = used_columns(c);
  Dataset d = read_csv(csv, opt, report);
  for (const auto& col : opt.used_columns) {
    if (!d.has_column(col)) {
      throw InputError("column '" + col + "' not found in " + csv.string());
    }
  }
  if (c.rescale != 1.0) {
    const auto y = d.numeric(c.response);
    std::vector<double> scaled(y.begin(), y.end());
    for (double& v : scaled) v *= c.rescale;
    d.set_numeric(c.response, std::move(scaled));
  }
  return std::make_shared<const Dataset>(std::move(d));
}

BoostProblem make_problem(const ModelConfig& c,
                          std::shared_ptr<const Dataset> data) {
  BoostProblem p;
  p.family = make_family(c.family);
  p.response = c.response;
  p.formulas = c.formulas;
  p.control = c.control;
  if (!c.weights_column.empty()) {
    const auto w = data->numeric(c.weights_column);
    p.weights.assign(w.begin(), w.end());
  }
  p.data = std::move(data);
  return p;
}

}  // namespace lssboost
