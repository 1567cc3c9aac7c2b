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

#include "lssboost/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lssboost/errors.hpp"

namespace lssboost {

using Json = nlohmann::ordered_json;

std::string fingerprint_hex(std::uint64_t fingerprint) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fingerprint));
  return buf;
}

namespace {

Json vector_json(const Eigen::VectorXd& v) {
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd json_vector(const Json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

Json learner_json(const BaseLearner& l) {
  Json j;
  j["kind"] = learner_kind_name(l.spec.kind);
  j["covariate"] = l.spec.covariate;
  j["name"] = l.name();
  switch (l.spec.kind) {
    case LearnerKind::kLinear:
      j["intercept"] = l.spec.intercept;
      break;
    case LearnerKind::kPSpline:
      j["knots"] = l.spec.knots;
      j["degree"] = l.spec.degree;
      j["diff_order"] = l.spec.diff_order;
      j["df"] = l.spec.df;
      j["lambda"] = l.lambda;
      j["lower"] = l.lower;
      j["upper"] = l.upper;
      j["knot_vector"] = l.knot_vector;
      break;
    case LearnerKind::kRidgeCategorical:
      j["df"] = l.spec.df;
      j["lambda"] = l.lambda;
      j["levels"] = l.levels;
      break;
    case LearnerKind::kMrf: {
      j["df"] = l.spec.df;
      j["lambda"] = l.lambda;
      const MrfGraph& g = *l.spec.graph;
      j["regions"] = g.regions();
      Json edges = Json::array();
      for (Eigen::Index a = 0; a < g.adjacency().rows(); ++a) {
        for (Eigen::Index b = a + 1; b < g.adjacency().cols(); ++b) {
          if (g.adjacency()(a, b) != 0) {
            edges.push_back(Json::array({a, b, g.adjacency()(a, b)}));
          }
        }
      }
      j["edges"] = std::move(edges);
      break;
    }
  }
  return j;
}

BaseLearner json_learner(const Json& j) {
  BaseLearner l;
  l.spec.kind = parse_learner_kind(j.at("kind").get<std::string>());
  l.spec.covariate = j.at("covariate").get<std::string>();
  switch (l.spec.kind) {
    case LearnerKind::kLinear:
      l.spec.intercept = j.at("intercept").get<bool>();
      break;
    case LearnerKind::kPSpline:
      l.spec.knots = j.at("knots").get<int>();
      l.spec.degree = j.at("degree").get<int>();
      l.spec.diff_order = j.at("diff_order").get<int>();
      l.spec.df = j.at("df").get<double>();
      l.lambda = j.at("lambda").get<double>();
      l.lower = j.at("lower").get<double>();
      l.upper = j.at("upper").get<double>();
      l.knot_vector = j.at("knot_vector").get<std::vector<double>>();
      break;
    case LearnerKind::kRidgeCategorical:
      l.spec.df = j.at("df").get<double>();
      l.lambda = j.at("lambda").get<double>();
      l.levels = j.at("levels").get<std::vector<std::string>>();
      break;
    case LearnerKind::kMrf: {
      l.spec.df = j.at("df").get<double>();
      l.lambda = j.at("lambda").get<double>();
      auto regions = j.at("regions").get<std::vector<std::string>>();
      const auto n = static_cast<Eigen::Index>(regions.size());
      Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
      for (const auto& e : j.at("edges")) {
        const auto a = e.at(0).get<Eigen::Index>();
        const auto b = e.at(1).get<Eigen::Index>();
        adj(a, b) = adj(b, a) = e.at(2).get<double>();
      }
      l.spec.graph =
          std::make_shared<const MrfGraph>(std::move(regions), std::move(adj));
      break;
    }
  }
  return l;
}

}  // namespace

std::string ModelSerializer::to_string(const BoostModel& m) {
  Json j;
  j["format"] = "lssboost-model";
  j["version"] = kModelFormatVersion;
  j["family"] = m.family().name();
  j["parameters"] = m.param_names();
  j["response"] = m.response_;
  j["control"] = {{"nu", m.nu_},
                  {"stabilization", stabilization_name(m.stabilization_)},
                  {"mstop", m.visible_},
                  {"path_mstop", m.path_mstop_}};
  j["data"] = {{"fingerprint", fingerprint_hex(m.fingerprint_)},
               {"rows", m.weights_.size()},
               {"weights", m.weights_}};
  j["offsets"] = m.offsets_;
  j["initial_risk"] = m.initial_risk_;

  Json covs = Json::array();
  for (const auto& c : m.covariates_) {
    Json cj;
    cj["name"] = c.name;
    cj["type"] = column_type_name(c.type);
    if (c.type == ColumnType::kContinuous) {
      cj["min"] = c.min;
      cj["max"] = c.max;
      cj["mean"] = c.mean;
    } else {
      cj["mode"] = c.mode;
      cj["levels"] = c.levels;
    }
    covs.push_back(std::move(cj));
  }
  j["covariates"] = std::move(covs);

  Json learners = Json::array();
  for (const auto& list : m.learners_) {
    Json lj = Json::array();
    for (const auto& l : list) lj.push_back(learner_json(l));
    learners.push_back(std::move(lj));
  }
  j["learners"] = std::move(learners);

  Json hist = Json::array();
  for (const auto& u : m.history_) {
    hist.push_back({{"m", u.iteration},
                    {"k", u.parameter},
                    {"j", u.learner},
                    {"increment", vector_json(u.increment)},
                    {"risk", u.risk}});
  }
  j["history"] = std::move(hist);

  Json meta = Json::object();
  for (const auto& [key, value] : m.metadata_) meta[key] = value;
  j["metadata"] = std::move(meta);
  return j.dump(1) + "\n";
}

BoostModel ModelSerializer::from_string(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw FormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "lssboost-model") {
      throw FormatError("not an lssboost model file");
    }
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw FormatError("unsupported model format version " +
                        std::to_string(version) + " (expected " +
                        std::to_string(kModelFormatVersion) + ")");
    }
    BoostModel m;
    m.family_ = make_family(j.at("family").get<std::string>());
    m.response_ = j.at("response").get<std::string>();
    const Json& ctrl = j.at("control");
    m.nu_ = ctrl.at("nu").get<std::vector<double>>();
    m.stabilization_ =
        parse_stabilization(ctrl.at("stabilization").get<std::string>());
    m.visible_ = ctrl.at("mstop").get<std::vector<int>>();
    m.path_mstop_ = ctrl.at("path_mstop").get<std::vector<int>>();
    const Json& data = j.at("data");
    m.fingerprint_ =
        std::stoull(data.at("fingerprint").get<std::string>(), nullptr, 16);
    m.weights_ = data.at("weights").get<std::vector<double>>();
    m.offsets_ = j.at("offsets").get<std::vector<double>>();
    m.initial_risk_ = j.at("initial_risk").get<double>();

    for (const auto& cj : j.at("covariates")) {
      CovariateSummary c;
      c.name = cj.at("name").get<std::string>();
      if (cj.at("type").get<std::string>() == "continuous") {
        c.type = ColumnType::kContinuous;
        c.min = cj.at("min").get<double>();
        c.max = cj.at("max").get<double>();
        c.mean = cj.at("mean").get<double>();
      } else {
        c.type = ColumnType::kCategorical;
        c.mode = cj.at("mode").get<std::string>();
        c.levels = cj.at("levels").get<std::vector<std::string>>();
      }
      m.covariates_.push_back(std::move(c));
    }

    for (const auto& lj : j.at("learners")) {
      std::vector<BaseLearner> list;
      for (const auto& l : lj) list.push_back(json_learner(l));
      m.learners_.push_back(std::move(list));
    }
    const std::size_t K = m.family_->num_params();
    if (m.learners_.size() != K || m.offsets_.size() != K ||
        m.nu_.size() != K || m.visible_.size() != K ||
        m.path_mstop_.size() != K) {
      throw FormatError("model file does not match the family's parameter "
                        "count");
    }
    for (const auto& hj : j.at("history")) {
      LearnerUpdate u;
      u.iteration = hj.at("m").get<int>();
      u.parameter = hj.at("k").get<std::size_t>();
      u.learner = hj.at("j").get<std::size_t>();
      u.increment = json_vector(hj.at("increment"));
      u.risk = hj.at("risk").get<double>();
      if (u.parameter >= K || u.learner >= m.learners_[u.parameter].size()) {
        throw FormatError("history entry refers to an unknown learner");
      }
      m.history_.push_back(std::move(u));
    }
    for (const auto& [key, value] : j.at("metadata").items()) {
      m.metadata_[key] = value.get<std::string>();
    }
    return m;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  }
}

std::string serialize_model(const BoostModel& model) {
  return ModelSerializer::to_string(model);
}

void save_model(const BoostModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << serialize_model(model);
  if (!out) throw InputError("error writing '" + path.string() + "'");
}

BoostModel deserialize_model(std::string_view text,
                             std::shared_ptr<const Dataset> data) {
  BoostModel m = ModelSerializer::from_string(text);
  if (data) m.attach_data(std::move(data));
  return m;
}

BoostModel load_model(const std::filesystem::path& path,
                      std::shared_ptr<const Dataset> data) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str(), std::move(data));
}

}  // namespace lssboost
