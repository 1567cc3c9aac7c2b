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

#include "lssboost/booster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "lssboost/errors.hpp"

namespace lssboost {

std::string_view stabilization_name(Stabilization s) {
  return s == Stabilization::kMad ? "mad" : "none";
}

Stabilization parse_stabilization(std::string_view name) {
  if (name == "none") return Stabilization::kNone;
  if (name == "mad" || name == "MAD") return Stabilization::kMad;
  throw InputError("unknown stabilization '" + std::string(name) + "'");
}

void BoostControl::resolve(std::size_t num_params) {
  if (mstop.size() == 1) mstop.assign(num_params, mstop.front());
  if (nu.size() == 1) nu.assign(num_params, nu.front());
  if (mstop.size() != num_params || nu.size() != num_params) {
    throw InputError("control needs one mstop and nu per parameter (" +
                     std::to_string(num_params) + ")");
  }
  for (int m : mstop) {
    if (m < 1) throw InputError("mstop must be >= 1 for every parameter");
  }
  for (double v : nu) {
    if (!(v > 0 && v < 1)) {
      throw InputError("step length nu must lie in (0, 1)");
    }
  }
}

namespace {

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

std::vector<double> stabilize(std::span<const double> u,
                              std::span<const double> weights,
                              Stabilization mode) {
  std::vector<double> out(u.begin(), u.end());
  if (mode == Stabilization::kNone || u.empty()) return out;

  std::vector<double> active;
  active.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (weights.empty() || weights[i] > 0) active.push_back(u[i]);
  }
  if (active.empty()) return out;

  const double med = median_of(active);
  std::vector<double> dev(active.size());
  for (std::size_t i = 0; i < active.size(); ++i) {
    dev[i] = std::abs(active[i] - med);
  }
  double scale = median_of(dev);
  if (!(scale >= 1e-10)) {
    const double mean =
        std::accumulate(active.begin(), active.end(), 0.0) / active.size();
    double mad = 0;
    for (double a : active) mad += std::abs(a - mean);
    scale = mad / active.size();
    if (!(scale >= 1e-10)) return out;
  }
  for (double& v : out) v /= scale;
  return out;
}

std::vector<double> stabilize(std::span<const double> u, Stabilization mode) {
  return stabilize(u, {}, mode);
}

std::vector<std::pair<int, std::size_t>> iteration_path(
    std::span<const int> mstop) {
  const int last = mstop.empty() ? 0 : *std::max_element(mstop.begin(),
                                                          mstop.end());
  std::vector<std::pair<int, std::size_t>> path;
  for (int m = 1; m <= last; ++m) {
    for (std::size_t k = 0; k < mstop.size(); ++k) {
      if (m <= mstop[k]) path.emplace_back(m, k);
    }
  }
  return path;
}

const CovariateSummary& BoostModel::covariate(std::string_view name) const {
  for (const auto& c : covariates_) {
    if (c.name == name) return c;
  }
  throw InputError("'" + std::string(name) + "' is not a model covariate");
}

std::span<const LearnerUpdate> BoostModel::visible_updates() const {
  const auto count = static_cast<std::size_t>(
      std::accumulate(visible_.begin(), visible_.end(), 0));
  return std::span<const LearnerUpdate>(history_).first(count);
}

const Dataset& BoostModel::data() const {
  if (!data_) throw InputError("model has no training data attached");
  return *data_;
}

void BoostModel::build_workspaces() {
  workspaces_.assign(learners_.size(), {});
  for (std::size_t k = 0; k < learners_.size(); ++k) {
    for (const auto& learner : learners_[k]) {
      workspaces_[k].push_back(build_workspace(learner, *data_, weights_));
    }
  }
}

namespace {

void apply_increment(std::vector<double>& eta, const SparseMatrix& design,
                     const Eigen::VectorXd& increment) {
  Eigen::Map<Eigen::VectorXd> e(eta.data(),
                                static_cast<Eigen::Index>(eta.size()));
  e += design * increment;
}

std::vector<std::vector<double>> replay(
    const std::vector<double>& offsets, std::size_t n,
    std::span<const LearnerUpdate> updates,
    const std::vector<std::vector<LearnerWorkspace>>& workspaces) {
  std::vector<std::vector<double>> eta(offsets.size());
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    eta[k].assign(n, offsets[k]);
  }
  for (const LearnerUpdate& u : updates) {
    apply_increment(eta[u.parameter],
                    workspaces[u.parameter][u.learner].design(), u.increment);
  }
  return eta;
}

}  // namespace

void BoostModel::replay_training_eta() {
  eta_ = replay(offsets_, y_.size(), history_, workspaces_);
}

void BoostModel::attach_data(std::shared_ptr<const Dataset> data) {
  if (!data) throw InputError("attach_data: null dataset");
  if (data->fingerprint() != fingerprint_) {
    throw FormatError("dataset fingerprint does not match the model");
  }
  const auto y = data->numeric(response_);
  data_ = std::move(data);
  y_.assign(y.begin(), y.end());
  build_workspaces();
  replay_training_eta();
}

void BoostModel::step(int iteration, std::size_t k) {
  const std::size_t n = y_.size();
  const std::size_t K = num_params();
  std::array<double, 4> e{}, theta{};
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights_[i] > 0)) continue;
    for (std::size_t q = 0; q < K; ++q) e[q] = eta_[q][i];
    family_->params_from_etas(std::span(e.data(), K),
                              std::span(theta.data(), K));
    u[i] = family_->grad_eta(k, y_[i], std::span(theta.data(), K));
    if (!std::isfinite(u[i])) {
      std::ostringstream msg;
      msg << "non-finite gradient at iteration " << iteration
          << ", parameter " << param_names()[k] << ", observation " << i + 1;
      throw NumericError(msg.str());
    }
  }
  if (stabilization_ != Stabilization::kNone) {
    u = stabilize(u, weights_, stabilization_);
  }

  const auto& candidates = workspaces_[k];
  std::size_t best = 0;
  LearnerFit best_fit = candidates[0].fit(u);
  for (std::size_t j = 1; j < candidates.size(); ++j) {
    LearnerFit f = candidates[j].fit(u);
    if (f.ssr < best_fit.ssr) {
      best = j;
      best_fit = std::move(f);
    }
  }

  LearnerUpdate update;
  update.iteration = iteration;
  update.parameter = k;
  update.learner = best;
  update.increment = nu_[k] * best_fit.coefficients;
  apply_increment(eta_[k], candidates[best].design(), update.increment);
  update.risk = weighted_nll(*family_, y_, weights_, eta_);
  history_.push_back(std::move(update));
}

void BoostModel::print_trace(int iteration, int last_iteration) const {
  if ((iteration - 1) % 35 == 0) std::fprintf(stderr, "[%4d] ", iteration);
  const double r = history_.back().risk;
  if (iteration == last_iteration) {
    std::fprintf(stderr, "\nFinal risk: %.7g\n", r);
  } else if (iteration % 35 == 0) {
    std::fprintf(stderr, " -- risk: %.7g\n", r);
  } else {
    std::fputc('.', stderr);
  }
}

void BoostModel::subset(std::vector<int> new_mstop) {
  const std::size_t K = num_params();
  if (new_mstop.size() == 1) new_mstop.assign(K, new_mstop.front());
  if (new_mstop.size() != K) {
    throw InputError("subset needs one mstop per parameter");
  }
  for (int m : new_mstop) {
    if (m < 0) throw InputError("mstop must be >= 0");
  }

  const auto target = iteration_path(new_mstop);
  std::size_t common = 0;
  while (common < target.size() && common < history_.size() &&
         history_[common].iteration == target[common].first &&
         history_[common].parameter == target[common].second) {
    ++common;
  }
  if (common == target.size()) {
    visible_ = std::move(new_mstop);
    return;
  }
  if (!data_) {
    throw InputError("mstop off the stored iteration path must be refitted, "
                     "which requires the training data; attach it first");
  }
  if (common < history_.size()) {
    history_.resize(common);
    replay_training_eta();
  }
  // Counts reached by the retained prefix.
  std::vector<int> counts(K, 0);
  for (const auto& u : history_) ++counts[u.parameter];
  path_mstop_ = counts;
  visible_ = counts;

  const int last = target.back().first;
  for (std::size_t s = common; s < target.size(); ++s) {
    const auto [m, k] = target[s];
    step(m, k);
    ++path_mstop_[k];
    visible_ = path_mstop_;
    const bool end_of_iteration =
        s + 1 == target.size() || target[s + 1].first != m;
    if (trace_ && end_of_iteration) print_trace(m, last);
  }
  path_mstop_ = new_mstop;
  visible_ = std::move(new_mstop);
}

std::vector<std::vector<double>> BoostModel::fitted_link() const {
  if (data_ && visible_ == path_mstop_) return eta_;
  if (!data_) throw InputError("training predictors need the training data");
  return replay(offsets_, y_.size(), visible_updates(), workspaces_);
}

std::vector<double> BoostModel::risk() const {
  std::vector<double> out;
  for (const LearnerUpdate& u : visible_updates()) {
    if (static_cast<std::size_t>(u.iteration) > out.size()) {
      out.push_back(u.risk);
    } else {
      out.back() = u.risk;
    }
  }
  return out;
}

std::vector<std::vector<Eigen::VectorXd>> BoostModel::coefficients() const {
  std::vector<std::vector<Eigen::VectorXd>> coef(num_params());
  for (std::size_t k = 0; k < num_params(); ++k) {
    for (const auto& learner : learners_[k]) {
      coef[k].push_back(
          Eigen::VectorXd::Zero(static_cast<Eigen::Index>(learner.dim())));
    }
  }
  for (const LearnerUpdate& u : visible_updates()) {
    coef[u.parameter][u.learner] += u.increment;
  }
  return coef;
}

std::vector<std::vector<std::size_t>> BoostModel::selected() const {
  std::vector<std::vector<std::size_t>> out(num_params());
  for (const LearnerUpdate& u : visible_updates()) {
    out[u.parameter].push_back(u.learner);
  }
  return out;
}

namespace {

std::vector<CovariateSummary> summarize_covariates(
    const Dataset& data, const std::vector<std::vector<BaseLearner>>& learners) {
  std::vector<CovariateSummary> out;
  for (const auto& list : learners) {
    for (const auto& learner : list) {
      const std::string& name = learner.spec.covariate;
      if (name.empty()) continue;
      if (std::any_of(out.begin(), out.end(),
                      [&](const CovariateSummary& c) { return c.name == name; })) {
        continue;
      }
      const Column& col = data.column(name);
      CovariateSummary s;
      s.name = name;
      s.type = col.type;
      if (col.type == ColumnType::kContinuous) {
        const auto [lo, hi] =
            std::minmax_element(col.numeric.begin(), col.numeric.end());
        s.min = *lo;
        s.max = *hi;
        s.mean = std::accumulate(col.numeric.begin(), col.numeric.end(), 0.0) /
                 static_cast<double>(col.numeric.size());
      } else {
        std::map<std::string, std::size_t> counts;
        for (const auto& l : col.labels) ++counts[l];
        std::size_t best = 0;
        for (const auto& [level, c] : counts) {
          s.levels.push_back(level);
          if (c > best) {  // ties keep the lexicographically lowest level
            best = c;
            s.mode = level;
          }
        }
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace

BoostModel fit(const BoostProblem& problem) {
  if (!problem.family) throw InputError("fit: no family given");
  if (!problem.data) throw InputError("fit: no data given");
  const Family& family = *problem.family;
  const Dataset& data = *problem.data;
  const std::size_t K = family.num_params();
  const std::size_t n = data.num_rows();

  auto formulas = problem.formulas;
  if (formulas.size() == 1) formulas.assign(K, formulas.front());
  if (formulas.size() != K) {
    throw InputError("fit: expected one learner list per parameter (" +
                     std::to_string(K) + ")");
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (formulas[k].empty()) {
      throw InputError("fit: no base-learners for parameter " +
                       family.param_names()[k]);
    }
  }
  BoostControl control = problem.control;
  control.resolve(K);

  std::vector<double> w = problem.weights;
  if (w.empty()) w.assign(n, 1.0);
  if (w.size() != n) throw InputError("fit: weights length mismatch");
  double total = 0;
  for (double v : w) {
    if (!(v >= 0) || !std::isfinite(v)) {
      throw InputError("fit: weights must be finite and non-negative");
    }
    total += v;
  }
  if (!(total > 0)) throw InputError("fit: weights sum to zero");

  const auto yspan = data.numeric(problem.response);
  for (double y : yspan) family.check_response(y);

  BoostModel model;
  model.family_ = problem.family;
  model.response_ = problem.response;
  model.nu_ = control.nu;
  model.stabilization_ = control.stabilization;
  model.trace_ = control.trace;
  model.weights_ = w;
  model.fingerprint_ = data.fingerprint();
  model.data_ = problem.data;
  model.y_.assign(yspan.begin(), yspan.end());
  model.offsets_ = compute_offset(family, model.y_, w);

  model.learners_.assign(K, {});
  model.workspaces_.assign(K, {});
  for (std::size_t k = 0; k < K; ++k) {
    for (const auto& spec : formulas[k]) {
      LearnerWorkspace ws = build_workspace(spec, data, w);
      model.learners_[k].push_back(ws.learner());
      model.workspaces_[k].push_back(std::move(ws));
    }
  }
  model.covariates_ = summarize_covariates(data, model.learners_);
  model.eta_.assign(K, {});
  for (std::size_t k = 0; k < K; ++k) model.eta_[k].assign(n, model.offsets_[k]);
  model.initial_risk_ = weighted_nll(family, model.y_, w, model.eta_);
  model.path_mstop_.assign(K, 0);
  model.visible_.assign(K, 0);
  model.subset(control.mstop);
  return model;
}

// ---------------------------------------------------------------------------

namespace {

bool parse_index(const std::string& token, std::size_t& index) {
  if (token.empty()) return false;
  std::size_t v = 0;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  index = v;
  return true;
}

}  // namespace

std::vector<std::size_t> select_parameters(
    const BoostModel& model, const std::vector<std::string>& tokens) {
  const auto& names = model.param_names();
  std::vector<std::size_t> out;
  if (tokens.empty()) {
    out.resize(names.size());
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  for (const auto& t : tokens) {
    std::size_t idx = 0;
    if (parse_index(t, idx)) {
      if (idx < 1 || idx > names.size()) {
        throw InputError("parameter index " + t + " out of range");
      }
      out.push_back(idx - 1);
      continue;
    }
    const auto it = std::find(names.begin(), names.end(), t);
    if (it == names.end()) {
      throw InputError("unknown parameter '" + t + "'");
    }
    out.push_back(static_cast<std::size_t>(it - names.begin()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> select_learners(
    const std::vector<BaseLearner>& list,
    const std::vector<std::string>& tokens) {
  std::vector<std::size_t> out;
  if (tokens.empty()) {
    out.resize(list.size());
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  for (const auto& t : tokens) {
    std::size_t idx = 0;
    if (parse_index(t, idx)) {
      if (idx >= 1 && idx <= list.size()) out.push_back(idx - 1);
      continue;
    }
    for (std::size_t j = 0; j < list.size(); ++j) {
      if (list[j].name().find(t) != std::string::npos) out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) {
    std::string joined;
    for (const auto& t : tokens) joined += (joined.empty() ? "" : ",") + t;
    throw InputError("no base-learner matches '" + joined + "'");
  }
  return out;
}

std::vector<PredictionColumn> predict(const BoostModel& model,
                                      const Dataset& newdata,
                                      const PredictionRequest& request) {
  const auto params = select_parameters(model, request.parameters);
  const auto coef = model.coefficients();
  const auto n = static_cast<Eigen::Index>(newdata.num_rows());
  std::vector<PredictionColumn> out;
  for (std::size_t k : params) {
    const auto& list = model.learners()[k];
    const LinkFunction& link = model.family().link(k);
    auto to_scale = [&](Eigen::VectorXd v) {
      if (request.type == PredictType::kResponse) {
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          v(i) = link.param_from_eta(v(i));
        }
      }
      return v;
    };
    if (request.which) {
      const auto js = select_learners(list, *request.which);
      for (std::size_t j : js) {
        PredictionColumn col;
        col.parameter = k;
        col.learner = j;
        col.label = model.param_names()[k] + ":" + list[j].name();
        col.values = to_scale(evaluate_learner(list[j], coef[k][j], newdata));
        out.push_back(std::move(col));
      }
      continue;
    }
    Eigen::VectorXd eta = Eigen::VectorXd::Constant(n, model.offsets()[k]);
    for (std::size_t j = 0; j < list.size(); ++j) {
      eta += evaluate_learner(list[j], coef[k][j], newdata);
    }
    PredictionColumn col;
    col.parameter = k;
    col.label = model.param_names()[k];
    col.values = to_scale(std::move(eta));
    out.push_back(std::move(col));
  }
  return out;
}

std::vector<std::vector<double>> predict_params(const BoostModel& model,
                                                const Dataset& newdata) {
  PredictionRequest req;
  req.type = PredictType::kResponse;
  const auto cols = predict(model, newdata, req);
  std::vector<std::vector<double>> out;
  for (const auto& c : cols) {
    out.emplace_back(c.values.data(), c.values.data() + c.values.size());
  }
  return out;
}

}  // namespace lssboost
