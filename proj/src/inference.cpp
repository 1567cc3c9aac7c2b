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

#include "lssboost/inference.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "lssboost/errors.hpp"

namespace lssboost {

IntervalRows prediction_intervals(const BoostModel& model,
                                  const Dataset& newdata,
                                  std::vector<double> levels) {
  if (levels.empty()) throw InputError("no interval levels given");
  for (double p : levels) {
    if (!(p > 0 && p < 1)) throw InputError("interval levels must lie in (0, 1)");
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  const auto params = predict_params(model, newdata);
  const std::size_t K = params.size();
  const std::size_t n = newdata.num_rows();
  IntervalRows out;
  out.median.resize(n);
  for (double p : levels) {
    out.bands.push_back({p, std::vector<double>(n), std::vector<double>(n)});
  }
  std::array<double, 4> theta{};
  const Family& fam = model.family();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < K; ++k) theta[k] = params[k][i];
    const std::span<const double> t(theta.data(), K);
    out.median[i] = fam.quantile(0.5, t);
    for (auto& band : out.bands) {
      band.lower[i] = fam.quantile((1 - band.level) / 2, t);
      band.upper[i] = fam.quantile((1 + band.level) / 2, t);
    }
  }
  return out;
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] =
        n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  }
  if (n > 1) v.back() = hi;
  return v;
}

}  // namespace

Dataset marginal_grid(const BoostModel& model, const std::string& which,
                      int grid_points,
                      std::vector<std::pair<std::string, std::string>>* fixed) {
  if (grid_points < 2) throw InputError("grid needs at least 2 points");
  const CovariateSummary* target = nullptr;
  for (const auto& c : model.covariates()) {
    if (c.name == which) target = &c;
  }
  if (!target) {
    throw InputError("'" + which + "' is not a covariate of the model");
  }
  if (target->type != ColumnType::kContinuous) {
    throw InputError("'" + which + "' is categorical; intervals need a "
                     "continuous covariate");
  }
  const auto n = static_cast<std::size_t>(grid_points);
  Dataset grid;
  for (const auto& c : model.covariates()) {
    if (c.name == which) {
      grid.add_continuous(c.name, linspace(c.min, c.max, grid_points));
    } else if (c.type == ColumnType::kContinuous) {
      grid.add_continuous(c.name, std::vector<double>(n, c.mean));
      if (fixed) fixed->emplace_back(c.name, format_double(c.mean));
    } else {
      grid.add_categorical(c.name, std::vector<std::string>(n, c.mode));
      if (fixed) fixed->emplace_back(c.name, c.mode);
    }
  }
  return grid;
}

bool PredictionIntervalTable::nested() const {
  const auto& b = rows.bands;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t l = 0; l < b.size(); ++l) {
      if (!(b[l].lower[i] <= rows.median[i] &&
            rows.median[i] <= b[l].upper[i])) {
        return false;
      }
      if (l > 0 && !(b[l].lower[i] <= b[l - 1].lower[i] &&
                     b[l - 1].upper[i] <= b[l].upper[i])) {
        return false;
      }
    }
  }
  return true;
}

PredictionIntervalTable predint(const BoostModel& model,
                                const std::string& which,
                                std::vector<double> levels, int grid_points) {
  PredictionIntervalTable t;
  t.covariate = which;
  const Dataset grid = marginal_grid(model, which, grid_points, &t.fixed);
  const auto x = grid.numeric(which);
  t.grid.assign(x.begin(), x.end());
  t.rows = prediction_intervals(model, grid, std::move(levels));
  return t;
}

std::vector<PartialEffectTable> partial_effects(
    const BoostModel& model, const std::vector<std::string>& parameters,
    const std::vector<std::string>& learners, int grid_points) {
  if (grid_points < 2) throw InputError("grid needs at least 2 points");
  const auto coef = model.coefficients();
  const auto selected = model.selected();
  std::vector<PartialEffectTable> out;
  for (std::size_t k : select_parameters(model, parameters)) {
    const auto& list = model.learners()[k];
    for (std::size_t j : select_learners(list, learners)) {
      const BaseLearner& l = list[j];
      PartialEffectTable t;
      t.parameter = k;
      t.param_name = model.param_names()[k];
      t.learner = j;
      t.learner_name = l.name();
      t.covariate = l.spec.covariate;
      t.selected = std::find(selected[k].begin(), selected[k].end(), j) !=
                   selected[k].end();
      Dataset grid;
      if (t.covariate.empty()) {
        grid.add_continuous("(row)", {0.0});
        t.x = {0.0};
      } else if (l.spec.kind == LearnerKind::kMrf ||
                 l.spec.kind == LearnerKind::kRidgeCategorical) {
        t.type = ColumnType::kCategorical;
        t.levels = l.spec.kind == LearnerKind::kMrf ? l.spec.graph->regions()
                                                    : l.levels;
        grid.add_categorical(t.covariate, t.levels);
      } else {
        const CovariateSummary& c = model.covariate(t.covariate);
        t.x = linspace(c.min, c.max, grid_points);
        grid.add_continuous(t.covariate, t.x);
      }
      t.effect = evaluate_learner(l, coef[k][j], grid);
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<RegionSummary> region_summary(
    const BoostModel& model, const Dataset& data, const std::string& region,
    const std::vector<std::string>& parameters, bool response_scale,
    bool aggregate) {
  const auto coef = model.coefficients();
  std::vector<RegionSummary> out;
  bool any = false;
  for (std::size_t k : select_parameters(model, parameters)) {
    const auto& list = model.learners()[k];
    std::vector<std::size_t> js;
    std::set<std::string> all_regions;
    for (std::size_t j = 0; j < list.size(); ++j) {
      const BaseLearner& l = list[j];
      if (l.spec.covariate != region) continue;
      if (l.spec.kind == LearnerKind::kMrf) {
        all_regions.insert(l.spec.graph->regions().begin(),
                           l.spec.graph->regions().end());
      } else if (l.spec.kind == LearnerKind::kRidgeCategorical) {
        all_regions.insert(l.levels.begin(), l.levels.end());
      } else {
        continue;
      }
      js.push_back(j);
    }
    if (js.empty()) continue;
    any = true;
    const LinkFunction& link = model.family().link(k);
    auto contribution = [&](const Dataset& d) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(
          static_cast<Eigen::Index>(d.num_rows()));
      for (std::size_t j : js) v += evaluate_learner(list[j], coef[k][j], d);
      if (response_scale) {
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          v(i) = link.param_from_eta(v(i));
        }
      }
      return v;
    };

    RegionSummary s;
    s.parameter = k;
    s.param_name = model.param_names()[k];
    const auto& labels = data.labels(region);
    const Eigen::VectorXd fitted = contribution(data);
    if (!aggregate) {
      s.regions = labels;
      s.value.assign(fitted.data(), fitted.data() + fitted.size());
      s.count.assign(labels.size(), 1);
      out.push_back(std::move(s));
      continue;
    }
    std::map<std::string, std::pair<double, std::size_t>> acc;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto& [sum, cnt] = acc[labels[i]];
      sum += fitted(static_cast<Eigen::Index>(i));
      ++cnt;
    }
    std::vector<std::string> unseen;
    for (const auto& r : all_regions) {
      if (!acc.count(r)) unseen.push_back(r);
    }
    Eigen::VectorXd direct;
    if (!unseen.empty()) {
      Dataset d;
      d.add_categorical(region, unseen);
      direct = contribution(d);
    }
    std::size_t u = 0;
    for (const auto& r : all_regions) {
      s.regions.push_back(r);
      if (auto it = acc.find(r); it != acc.end()) {
        s.value.push_back(it->second.first /
                          static_cast<double>(it->second.second));
        s.count.push_back(it->second.second);
      } else {
        s.value.push_back(direct(static_cast<Eigen::Index>(u++)));
        s.count.push_back(0);
      }
    }
    out.push_back(std::move(s));
  }
  if (!any) {
    throw InputError("no mrf or ridge learner on '" + region +
                     "' among the selected parameters");
  }
  return out;
}

}  // namespace lssboost
