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

#include "lssboost/simulate.hpp"

#include <array>
#include <cmath>

#include <json.hpp>

#include "lssboost/errors.hpp"
#include "lssboost/families.hpp"
#include "lssboost/random.hpp"

namespace lssboost {

using Json = nlohmann::json;

SimulationSpec parse_simulation_spec(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw InputError(std::string("generator spec is not valid JSON: ") +
                     e.what());
  }
  try {
    SimulationSpec s;
    s.family = j.value("family", s.family);
    s.response = j.value("response", s.response);
    s.n = j.value("n", std::size_t{0});
    s.seed = j.value("seed", s.seed);
    const auto names = make_family(s.family)->param_names();
    for (const auto& c : j.at("covariates")) {
      CovariateGenerator g;
      g.name = c.at("name").get<std::string>();
      const auto dist = c.value("dist", std::string("uniform"));
      if (dist == "uniform") {
        g.a = c.value("min", 0.0);
        g.b = c.value("max", 1.0);
        if (!(g.a < g.b)) throw InputError("uniform needs min < max");
      } else if (dist == "normal") {
        g.kind = CovariateGenerator::Kind::kNormal;
        g.a = c.value("mean", 0.0);
        g.b = c.value("sd", 1.0);
        if (!(g.b > 0)) throw InputError("normal needs sd > 0");
      } else if (dist == "categorical") {
        g.kind = CovariateGenerator::Kind::kCategorical;
        g.levels = c.at("levels").get<std::vector<std::string>>();
        if (g.levels.empty()) throw InputError("categorical needs levels");
      } else {
        throw InputError("unknown covariate distribution '" + dist + "'");
      }
      s.covariates.push_back(std::move(g));
    }
    s.eta.resize(names.size());
    const Json eta = j.value("eta", Json::object());
    for (const auto& [key, e] : eta.items()) {
      const auto it = std::find(names.begin(), names.end(), key);
      if (it == names.end()) {
        throw InputError("eta given for unknown parameter '" + key + "'");
      }
      EtaSpec& spec = s.eta[static_cast<std::size_t>(it - names.begin())];
      spec.intercept = e.value("intercept", 0.0);
      for (const auto& t : e.value("terms", Json::array())) {
        EffectTerm term;
        const auto type = t.at("type").get<std::string>();
        term.covariate = t.at("covariate").get<std::string>();
        if (type == "linear") {
          term.coef = t.value("coef", 1.0);
        } else if (type == "sin") {
          term.kind = EffectTerm::Kind::kSin;
          term.coef = t.value("coef", 1.0);
          term.freq = t.value("freq", 1.0);
        } else if (type == "levels") {
          term.kind = EffectTerm::Kind::kLevels;
          term.values = t.at("values").get<std::map<std::string, double>>();
        } else {
          throw InputError("unknown term type '" + type + "'");
        }
        bool known = false;
        for (const auto& g : s.covariates) known |= g.name == term.covariate;
        if (!known) {
          throw InputError("term uses unknown covariate '" + term.covariate +
                           "'");
        }
        spec.terms.push_back(std::move(term));
      }
    }
    return s;
  } catch (const Json::exception& e) {
    throw InputError(std::string("invalid generator spec: ") + e.what());
  }
}

SimulationResult simulate(const SimulationSpec& spec) {
  if (spec.n == 0) throw InputError("simulation needs n >= 1");
  const FamilyPtr family = make_family(spec.family);
  const std::size_t K = family->num_params();
  if (spec.eta.size() != K) {
    throw InputError("generator needs one predictor per parameter");
  }
  const std::size_t n = spec.n;
  Rng rng(spec.seed);
  SimulationResult r;
  for (const auto& g : spec.covariates) {
    if (g.kind == CovariateGenerator::Kind::kCategorical) {
      std::vector<std::string> v(n);
      for (auto& x : v) x = g.levels[rng.index(g.levels.size())];
      r.data.add_categorical(g.name, std::move(v));
    } else {
      std::vector<double> v(n);
      for (auto& x : v) {
        x = g.kind == CovariateGenerator::Kind::kUniform
                ? rng.uniform(g.a, g.b)
                : g.a + g.b * rng.normal();
      }
      r.data.add_continuous(g.name, std::move(v));
    }
  }

  std::vector<std::vector<double>> eta(K, std::vector<double>(n));
  for (std::size_t k = 0; k < K; ++k) {
    std::fill(eta[k].begin(), eta[k].end(), spec.eta[k].intercept);
    for (const auto& t : spec.eta[k].terms) {
      for (std::size_t i = 0; i < n; ++i) {
        if (t.kind == EffectTerm::Kind::kLevels) {
          const auto& label = r.data.labels(t.covariate)[i];
          const auto it = t.values.find(label);
          if (it != t.values.end()) eta[k][i] += it->second;
        } else {
          const double x = r.data.numeric(t.covariate)[i];
          eta[k][i] += t.kind == EffectTerm::Kind::kLinear
                           ? t.coef * x
                           : t.coef * std::sin(t.freq * x);
        }
      }
    }
  }

  std::vector<double> y(n);
  std::vector<std::vector<double>> theta(K, std::vector<double>(n));
  std::array<double, 4> e{}, th{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < K; ++k) e[k] = eta[k][i];
    family->params_from_etas(std::span(e.data(), K), std::span(th.data(), K));
    for (std::size_t k = 0; k < K; ++k) theta[k][i] = th[k];
    y[i] = family->sample(rng, std::span<const double>(th.data(), K));
  }
  r.data.add_continuous(spec.response, std::move(y));
  const auto& names = family->param_names();
  for (std::size_t k = 0; k < K; ++k) {
    r.truth.add_continuous("eta_" + names[k], std::move(eta[k]));
  }
  for (std::size_t k = 0; k < K; ++k) {
    r.truth.add_continuous(names[k], std::move(theta[k]));
  }
  return r;
}

}  // namespace lssboost
