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

#include "lssboost/learners.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lssboost/errors.hpp"

namespace lssboost {

// ---------------------------------------------------------------------------
// MrfGraph

MrfGraph::MrfGraph(std::vector<std::string> regions, Eigen::MatrixXd adjacency)
    : regions_(std::move(regions)), adjacency_(std::move(adjacency)) {
  const auto n = static_cast<Eigen::Index>(regions_.size());
  if (adjacency_.rows() != n || adjacency_.cols() != n) {
    throw InputError("adjacency matrix must be square with one row per "
                     "region");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency_(i, i) != 0) {
      throw InputError("adjacency matrix has a non-zero diagonal at '" +
                       regions_[static_cast<std::size_t>(i)] + "'");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(adjacency_(i, j) >= 0)) {
        throw InputError("adjacency matrix has a negative entry");
      }
      if (adjacency_(i, j) != adjacency_(j, i)) {
        throw InputError("adjacency matrix is not symmetric");
      }
    }
  }
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (!index_.emplace(regions_[i], i).second) {
      throw InputError("duplicate region label '" + regions_[i] + "'");
    }
  }
}

MrfGraph MrfGraph::from_edges(
    const std::vector<std::pair<std::string, std::string>>& edges) {
  std::set<std::string> labels;
  for (const auto& [a, b] : edges) {
    labels.insert(a);
    labels.insert(b);
  }
  std::vector<std::string> regions(labels.begin(), labels.end());
  std::map<std::string, Eigen::Index> pos;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    pos[regions[i]] = static_cast<Eigen::Index>(i);
  }
  const auto n = static_cast<Eigen::Index>(regions.size());
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [a, b] : edges) {
    if (a == b) throw InputError("self-loop on region '" + a + "'");
    adj(pos[a], pos[b]) = 1;
    adj(pos[b], pos[a]) = 1;
  }
  return MrfGraph(std::move(regions), std::move(adj));
}

std::optional<std::size_t> MrfGraph::index_of(const std::string& region) const {
  const auto it = index_.find(region);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::MatrixXd MrfGraph::penalty() const {
  Eigen::MatrixXd k = -adjacency_;
  k.diagonal() = adjacency_.rowwise().sum();
  return k;
}

MrfGraph read_adjacency(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open adjacency file '" + path.string() +
                            "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw InputError("empty adjacency file");

  const bool matrix = rows.front().front().empty();
  if (!matrix) {
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& r : rows) {
      if (r.size() != 2) {
        throw InputError("edge list lines must hold exactly two regions");
      }
      edges.emplace_back(r[0], r[1]);
    }
    return MrfGraph::from_edges(edges);
  }

  std::vector<std::string> regions(rows.front().begin() + 1,
                                   rows.front().end());
  const auto n = static_cast<Eigen::Index>(regions.size());
  if (rows.size() != regions.size() + 1) {
    throw InputError("adjacency matrix must be square");
  }
  Eigen::MatrixXd adj(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i) + 1];
    if (r.size() != regions.size() + 1 ||
        r[0] != regions[static_cast<std::size_t>(i)]) {
      throw InputError("adjacency row " + std::to_string(i + 1) +
                       " does not match the header labels");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      double v = 0;
      if (!parse_double(r[static_cast<std::size_t>(j) + 1], v)) {
        throw InputError("non-numeric adjacency entry");
      }
      adj(i, j) = v;
    }
  }
  return MrfGraph(std::move(regions), std::move(adj));
}

// ---------------------------------------------------------------------------
// Specs

std::string_view learner_kind_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kLinear:
      return "linear";
    case LearnerKind::kPSpline:
      return "pspline";
    case LearnerKind::kRidgeCategorical:
      return "ridge_categorical";
    case LearnerKind::kMrf:
      return "mrf";
  }
  return "?";
}

LearnerKind parse_learner_kind(std::string_view name) {
  if (name == "linear") return LearnerKind::kLinear;
  if (name == "pspline") return LearnerKind::kPSpline;
  if (name == "ridge_categorical" || name == "ridge") {
    return LearnerKind::kRidgeCategorical;
  }
  if (name == "mrf") return LearnerKind::kMrf;
  throw InputError("unknown learner kind '" + std::string(name) + "'");
}

std::string BaseLearnerSpec::name() const {
  if (kind == LearnerKind::kLinear && covariate.empty()) return "intercept";
  return std::string(learner_kind_name(kind)) + "(" + covariate + ")";
}

void BaseLearnerSpec::validate() const {
  const std::string who = name();
  if (covariate.empty() && kind != LearnerKind::kLinear) {
    throw InputError(who + ": covariate required");
  }
  switch (kind) {
    case LearnerKind::kLinear:
      if (covariate.empty() && !intercept) {
        throw InputError("linear learner without covariate needs an "
                         "intercept");
      }
      break;
    case LearnerKind::kPSpline: {
      if (degree < 1) throw InputError(who + ": degree must be >= 1");
      if (knots < 5) throw InputError(who + ": at least 5 knots required");
      if (diff_order < 1 || diff_order > 3) {
        throw InputError(who + ": difference order must be 1, 2 or 3");
      }
      const int basis = knots + degree + 1;
      if (!(df > diff_order) || !(df < basis)) {
        throw InputError(who + ": df must lie in (" +
                         std::to_string(diff_order) + ", " +
                         std::to_string(basis) + ")");
      }
      break;
    }
    case LearnerKind::kRidgeCategorical:
      if (!(df > 0)) throw InputError(who + ": df must be positive");
      break;
    case LearnerKind::kMrf:
      if (!graph) throw InputError(who + ": adjacency graph required");
      if (!(df > 0)) throw InputError(who + ": df must be positive");
      break;
  }
}

// ---------------------------------------------------------------------------
// B-splines

std::vector<double> equidistant_knots(double lower, double upper, int knots,
                                      int degree) {
  const double h = (upper - lower) / (knots + 1);
  std::vector<double> t(static_cast<std::size_t>(knots + 2 + 2 * degree));
  for (std::size_t j = 0; j < t.size(); ++j) {
    t[j] = lower + (static_cast<double>(j) - degree) * h;
  }
  t[static_cast<std::size_t>(degree)] = lower;
  t[static_cast<std::size_t>(degree + knots + 1)] = upper;
  return t;
}

namespace {

// Non-zero basis functions N_{span-p..span, p}(x); see Piegl & Tiller,
// algorithm A2.2.
void basis_funs(std::size_t span, double x, int p, std::span<const double> t,
                std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(p) + 1, 0.0);
  std::vector<double> left(static_cast<std::size_t>(p) + 1),
      right(static_cast<std::size_t>(p) + 1);
  out[0] = 1.0;
  for (std::size_t j = 1; j <= static_cast<std::size_t>(p); ++j) {
    left[j] = x - t[span + 1 - j];
    right[j] = t[span + j] - x;
    double saved = 0.0;
    for (std::size_t r = 0; r < j; ++r) {
      const double temp = out[r] / (right[r + 1] + left[j - r]);
      out[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out[j] = saved;
  }
}

std::size_t find_span(double x, std::span<const double> t, int degree) {
  const auto p = static_cast<std::size_t>(degree);
  const std::size_t last = t.size() - p - 2;  // last interval inside range
  if (x <= t[p]) return p;
  if (x >= t[last + 1]) return last;
  const auto it = std::upper_bound(t.begin() + static_cast<std::ptrdiff_t>(p),
                                   t.begin() + static_cast<std::ptrdiff_t>(last) + 1,
                                   x);
  return static_cast<std::size_t>(it - t.begin()) - 1;
}

}  // namespace

Eigen::VectorXd bspline_row(double x, std::span<const double> t, int degree,
                            double lower, double upper) {
  const auto p = static_cast<std::size_t>(degree);
  const std::size_t d = t.size() - p - 1;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  const double at = std::clamp(x, lower, upper);
  const std::size_t span = find_span(at, t, degree);
  std::vector<double> n;
  basis_funs(span, at, degree, t, n);
  for (std::size_t r = 0; r <= p; ++r) {
    row(static_cast<Eigen::Index>(span - p + r)) = n[r];
  }
  if (x == at) return row;

  // Linear extension: B(b) + B'(b) (x - b).
  std::vector<double> lower_deg;
  basis_funs(span, at, degree - 1, t, lower_deg);
  const double shift = x - at;
  for (std::size_t r = 0; r <= p; ++r) {
    const std::size_t j = span - p + r;
    // N_{j,p-1} is non-zero for j in [span-p+1, span]; index r-1 there.
    const double a = r >= 1 ? lower_deg[r - 1] : 0.0;
    const double b = r < p ? lower_deg[r] : 0.0;
    const double deriv = degree * (a / (t[j + p] - t[j]) -
                                   b / (t[j + p + 1] - t[j + 1]));
    row(static_cast<Eigen::Index>(j)) += deriv * shift;
  }
  return row;
}

Eigen::MatrixXd difference_matrix(std::size_t d, int order) {
  Eigen::MatrixXd diff = Eigen::MatrixXd::Identity(
      static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (int o = 0; o < order; ++o) {
    const Eigen::Index r = diff.rows() - 1;
    diff = (diff.bottomRows(r) - diff.topRows(r)).eval();
  }
  return diff;
}

// ---------------------------------------------------------------------------
// BaseLearner

std::size_t BaseLearner::dim() const {
  switch (spec.kind) {
    case LearnerKind::kLinear:
      return (spec.intercept ? 1 : 0) + (spec.covariate.empty() ? 0 : 1);
    case LearnerKind::kPSpline:
      return knot_vector.size() - static_cast<std::size_t>(spec.degree) - 1;
    case LearnerKind::kRidgeCategorical:
      return levels.size();
    case LearnerKind::kMrf:
      return spec.graph->size();
  }
  return 0;
}

SparseMatrix BaseLearner::design(const Dataset& data) const {
  const std::size_t n = data.num_rows();
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(dim());
  std::vector<Eigen::Triplet<double>> triplets;
  switch (spec.kind) {
    case LearnerKind::kLinear: {
      std::span<const double> x;
      if (!spec.covariate.empty()) x = data.numeric(spec.covariate);
      triplets.reserve(n * dim());
      for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        Eigen::Index c = 0;
        if (spec.intercept) triplets.emplace_back(r, c++, 1.0);
        if (!x.empty()) triplets.emplace_back(r, c, x[i]);
      }
      break;
    }
    case LearnerKind::kPSpline: {
      const auto x = data.numeric(spec.covariate);
      triplets.reserve(n * static_cast<std::size_t>(spec.degree + 1));
      for (std::size_t i = 0; i < n; ++i) {
        const Eigen::VectorXd row =
            bspline_row(x[i], knot_vector, spec.degree, lower, upper);
        for (Eigen::Index c = 0; c < row.size(); ++c) {
          if (row(c) != 0.0) {
            triplets.emplace_back(static_cast<Eigen::Index>(i), c, row(c));
          }
        }
      }
      break;
    }
    case LearnerKind::kRidgeCategorical: {
      const auto& labels = data.labels(spec.covariate);
      for (std::size_t i = 0; i < n; ++i) {
        const auto it =
            std::lower_bound(levels.begin(), levels.end(), labels[i]);
        if (it == levels.end() || *it != labels[i]) {
          throw InputError(name() + ": unseen level '" + labels[i] + "'");
        }
        triplets.emplace_back(static_cast<Eigen::Index>(i),
                              static_cast<Eigen::Index>(it - levels.begin()),
                              1.0);
      }
      break;
    }
    case LearnerKind::kMrf: {
      const auto& labels = data.labels(spec.covariate);
      for (std::size_t i = 0; i < n; ++i) {
        const auto idx = spec.graph->index_of(labels[i]);
        if (!idx) {
          throw InputError(name() + ": region '" + labels[i] +
                           "' is not in the adjacency graph");
        }
        triplets.emplace_back(static_cast<Eigen::Index>(i),
                              static_cast<Eigen::Index>(*idx), 1.0);
      }
      break;
    }
  }
  SparseMatrix x(rows, cols);
  x.setFromTriplets(triplets.begin(), triplets.end());
  return x;
}

Eigen::MatrixXd BaseLearner::penalty() const {
  const auto d = static_cast<Eigen::Index>(dim());
  switch (spec.kind) {
    case LearnerKind::kLinear:
      return Eigen::MatrixXd::Zero(d, d);
    case LearnerKind::kPSpline: {
      const Eigen::MatrixXd diff = difference_matrix(dim(), spec.diff_order);
      return diff.transpose() * diff;
    }
    case LearnerKind::kRidgeCategorical:
      return Eigen::MatrixXd::Identity(d, d);
    case LearnerKind::kMrf:
      return spec.graph->penalty();
  }
  return {};
}

BaseLearner resolve_learner(const BaseLearnerSpec& spec, const Dataset& data) {
  spec.validate();
  BaseLearner learner;
  learner.spec = spec;
  if (!spec.covariate.empty() && !data.has_column(spec.covariate)) {
    throw InputError(spec.name() + ": unknown covariate '" + spec.covariate +
                     "'");
  }
  switch (spec.kind) {
    case LearnerKind::kLinear:
      if (!spec.covariate.empty()) data.numeric(spec.covariate);
      break;
    case LearnerKind::kPSpline: {
      const auto x = data.numeric(spec.covariate);
      const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
      if (x.empty() || !(*hi > *lo)) {
        throw CalibrationError(spec.name() +
                               ": covariate is constant, cannot place knots");
      }
      learner.lower = *lo;
      learner.upper = *hi;
      learner.knot_vector =
          equidistant_knots(*lo, *hi, spec.knots, spec.degree);
      break;
    }
    case LearnerKind::kRidgeCategorical:
      learner.levels = data.levels(spec.covariate);
      break;
    case LearnerKind::kMrf:
      data.labels(spec.covariate);
      break;
  }
  return learner;
}

// ---------------------------------------------------------------------------
// Penalized least squares

double hat_trace(const Eigen::MatrixXd& xtwx, const Eigen::MatrixXd& penalty,
                 double lambda) {
  const Eigen::MatrixXd a = xtwx + lambda * penalty;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  return ldlt.solve(xtwx).trace();
}

double calibrate_lambda(const Eigen::MatrixXd& xtwx,
                        const Eigen::MatrixXd& penalty, double target_df) {
  constexpr double kLogMin = -30.0, kLogMax = 30.0;
  const double df_small = hat_trace(xtwx, penalty, std::exp(kLogMin));
  const double df_large = hat_trace(xtwx, penalty, std::exp(kLogMax));
  if (!(target_df < df_small) || !(target_df > df_large)) {
    std::ostringstream msg;
    msg << "target df " << target_df << " outside attainable range ("
        << df_large << ", " << df_small << ")";
    throw CalibrationError(msg.str());
  }
  double lo = kLogMin, hi = kLogMax;  // df(lo) > target > df(hi)
  double mid = 0, df = 0;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    df = hat_trace(xtwx, penalty, std::exp(mid));
    if (std::abs(df - target_df) < 1e-8) break;
    if (df > target_df) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-14) break;
  }
  if (!(std::abs(df - target_df) < 1e-4)) {
    std::ostringstream msg;
    msg << "lambda calibration stalled at df " << df << " (target "
        << target_df << ")";
    throw CalibrationError(msg.str());
  }
  return std::exp(mid);
}

LearnerWorkspace::LearnerWorkspace(BaseLearner learner, SparseMatrix design,
                                   std::vector<double> weights)
    : learner_(std::move(learner)),
      design_(std::move(design)),
      weights_(std::move(weights)) {
  if (static_cast<std::size_t>(design_.rows()) != weights_.size()) {
    throw InputError("weights length does not match the data");
  }
  const Eigen::Map<const Eigen::VectorXd> w(
      weights_.data(), static_cast<Eigen::Index>(weights_.size()));
  const SparseMatrix xtw = design_.transpose() * w.asDiagonal();
  xtwx_ = Eigen::MatrixXd(xtw * design_);
  Eigen::MatrixXd a = xtwx_;
  if (learner_.lambda > 0) a += learner_.lambda * learner_.penalty();
  solver_.compute(a);
  if (solver_.info() != Eigen::Success) {
    throw NumericError(learner_.name() +
                       ": singular normal equations (X'WX + lambda P)");
  }
}

LearnerFit LearnerWorkspace::fit(std::span<const double> gradient) const {
  if (gradient.size() != weights_.size()) {
    throw InputError("gradient length does not match the data");
  }
  const auto n = static_cast<Eigen::Index>(gradient.size());
  const Eigen::Map<const Eigen::VectorXd> u(gradient.data(), n);
  const Eigen::Map<const Eigen::VectorXd> w(weights_.data(), n);
  const Eigen::VectorXd wu = w.cwiseProduct(u);
  LearnerFit out;
  out.coefficients = solver_.solve(design_.transpose() * wu);
  out.fitted = design_ * out.coefficients;
  out.ssr = (w.array() * (u - out.fitted).array().square()).sum();
  return out;
}

LearnerWorkspace build_workspace(const BaseLearnerSpec& spec,
                                 const Dataset& data,
                                 std::span<const double> weights) {
  BaseLearner learner = resolve_learner(spec, data);
  SparseMatrix x = learner.design(data);
  std::vector<double> w(weights.begin(), weights.end());
  if (learner.has_penalty()) {
    const Eigen::Map<const Eigen::VectorXd> wv(
        w.data(), static_cast<Eigen::Index>(w.size()));
    const SparseMatrix xtw = x.transpose() * wv.asDiagonal();
    const Eigen::MatrixXd xtwx(xtw * x);
    try {
      learner.lambda = calibrate_lambda(xtwx, learner.penalty(), spec.df);
    } catch (const CalibrationError& e) {
      throw CalibrationError(spec.name() + ": " + e.what());
    }
  }
  return LearnerWorkspace(std::move(learner), std::move(x), std::move(w));
}

LearnerWorkspace build_workspace(const BaseLearner& learner,
                                 const Dataset& data,
                                 std::span<const double> weights) {
  return LearnerWorkspace(learner, learner.design(data),
                          std::vector<double>(weights.begin(), weights.end()));
}

Eigen::VectorXd evaluate_learner(const BaseLearner& learner,
                                 const Eigen::VectorXd& coefficients,
                                 const Dataset& newdata) {
  if (static_cast<std::size_t>(coefficients.size()) != learner.dim()) {
    throw InputError(learner.name() + ": coefficient length mismatch");
  }
  return learner.design(newdata) * coefficients;
}

}  // namespace lssboost
