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

// Command-line front end: simulate, fit, cv, predict, predint, partials,
// region-summary and summary.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lssboost/booster.hpp"
#include "lssboost/config.hpp"
#include "lssboost/dataset.hpp"
#include "lssboost/errors.hpp"
#include "lssboost/inference.hpp"
#include "lssboost/serialize.hpp"
#include "lssboost/simulate.hpp"
#include "lssboost/tuning.hpp"

namespace fs = std::filesystem;
using namespace lssboost;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw InputError("error writing '" + path.string() + "'");
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

// One-line comment heading every table: the model fingerprint and settings.
std::string header_comment(const BoostModel& model, const std::string& what) {
  std::string mstop;
  for (std::size_t k = 0; k < model.mstop().size(); ++k) {
    mstop += (k ? "," : "") + std::to_string(model.mstop()[k]);
  }
  return "# lssboost " + what +
         " fingerprint=" + fingerprint_hex(model.data_fingerprint()) +
         " family=" + model.family().name() + " mstop=" + mstop + "\n";
}

double model_rescale(const BoostModel& model) {
  const auto it = model.metadata().find("rescale");
  if (it == model.metadata().end()) return 1.0;
  double v = 1.0;
  if (!parse_double(it->second, v) || !(v > 0)) {
    throw FormatError("model carries an invalid rescale factor");
  }
  return v;
}

// Reads prediction data using the model's covariate types.
Dataset read_newdata(const BoostModel& model, const fs::path& csv) {
  IngestOptions opt;
  for (const auto& c : model.covariates()) {
    opt.type_hints[c.name] = c.type;
    opt.used_columns.push_back(c.name);
  }
  IngestReport rep;
  Dataset d = read_csv(csv, opt, &rep);
  if (rep.rows_dropped) {
    warn(std::to_string(rep.rows_dropped) +
         " rows with missing covariates were dropped");
  }
  return d;
}

struct Common {
  std::string data, config, model, out_dir = ".", out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double rescale = 0;
  unsigned cores = 1;
};

ModelConfig config_with_overrides(const Common& c,
                                  const std::vector<int>& mstop, bool trace) {
  if (c.config.empty()) throw InputError("--config is required");
  ModelConfig cfg = load_config(c.config);
  if (c.seed_given) cfg.seed = c.seed;
  if (c.rescale > 0) {
    if (c.rescale != 1.0 && !make_family(cfg.family)->scales_with_response(0)) {
      throw InputError("rescaling the response is not supported for the " +
                       cfg.family + " family");
    }
    cfg.rescale = c.rescale;
  }
  if (!mstop.empty()) {
    cfg.control.mstop = mstop;
    cfg.control.resolve(make_family(cfg.family)->num_params());
  }
  if (trace) cfg.control.trace = true;
  return cfg;
}

std::shared_ptr<const Dataset> training_data(const ModelConfig& cfg,
                                             const std::string& path) {
  if (path.empty()) throw InputError("--data is required");
  IngestReport rep;
  auto d = load_training_data(cfg, path, &rep);
  if (rep.rows_dropped) {
    std::fprintf(stderr, "read %zu rows, dropped %zu with missing values\n",
                 rep.rows_read, rep.rows_dropped);
  }
  return d;
}

void stamp(BoostModel& model, const ModelConfig& cfg) {
  model.metadata()["config"] = config_to_json(cfg);
  model.metadata()["rescale"] = format_double(cfg.rescale);
}

void write_fit_artifacts(const BoostModel& model, const fs::path& dir,
                         const fs::path& model_path) {
  fs::create_directories(dir);
  if (model_path.has_parent_path()) {
    fs::create_directories(model_path.parent_path());
  }
  save_model(model, model_path);
  const auto names = model.param_names();
  {
    const fs::path p = dir / "risk.csv";
    auto out = open_out(p);
    out << header_comment(model, "risk");
    out << "iteration,risk\n0," << format_double(model.initial_risk())
        << "\n";
    const auto r = model.risk();
    for (std::size_t m = 0; m < r.size(); ++m) {
      out << m + 1 << ',' << format_double(r[m]) << '\n';
    }
    finish(out, p);
  }
  {
    const fs::path p = dir / "selected.csv";
    auto out = open_out(p);
    out << header_comment(model, "selected");
    out << "iteration,parameter,learner_index,learner\n";
    for (const auto& u : model.visible_updates()) {
      out << u.iteration << ',' << names[u.parameter] << ','
          << u.learner + 1 << ','
          << csv_field(model.learners()[u.parameter][u.learner].name())
          << '\n';
    }
    finish(out, p);
  }
  {
    const fs::path p = dir / "fitted.csv";
    auto out = open_out(p);
    out << header_comment(model, "fitted");
    const double c = model_rescale(model);
    const auto eta = model.fitted_link();
    out << "row";
    for (const auto& n : names) out << ",eta_" << n;
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    for (std::size_t i = 0; i < model.num_rows(); ++i) {
      out << i + 1;
      for (std::size_t k = 0; k < names.size(); ++k) {
        out << ',' << format_double(eta[k][i]);
      }
      for (std::size_t k = 0; k < names.size(); ++k) {
        double v = model.family().link(k).param_from_eta(eta[k][i]);
        if (model.family().scales_with_response(k)) v /= c;
        out << ',' << format_double(v);
      }
      out << '\n';
    }
    finish(out, p);
  }
}

int cmd_simulate(const Common& c, const std::string& spec_path,
                 std::size_t n, bool n_given) {
  if (spec_path.empty()) throw InputError("--spec is required");
  std::ifstream in(spec_path);
  if (!in) throw InputError("cannot open '" + spec_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  SimulationSpec spec = parse_simulation_spec(ss.str());
  if (n_given) spec.n = n;
  if (c.seed_given) spec.seed = c.seed;
  if (spec.n == 0) throw InputError("simulation needs n >= 1");
  const auto r = simulate(spec);
  const fs::path out = c.out.empty() ? fs::path(c.out_dir) / "simulated.csv"
                                     : fs::path(c.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_csv(r.data, out);
  fs::path truth = out;
  truth.replace_extension(".truth.csv");
  write_csv(r.truth, truth);
  return 0;
}

int cmd_fit(const Common& c, const std::vector<int>& mstop, bool trace) {
  const ModelConfig cfg = config_with_overrides(c, mstop, trace);
  const auto data = training_data(cfg, c.data);
  BoostModel model = fit(make_problem(cfg, data));
  stamp(model, cfg);
  const fs::path dir = c.out_dir;
  const fs::path model_path =
      c.model.empty() ? dir / "model.json" : fs::path(c.model);
  write_fit_artifacts(model, dir, model_path);
  return 0;
}

struct CvFlags {
  std::vector<int> grid_max;
  int grid_min = 0, length_out = 0, folds = 0;
  double fraction = 0;
  bool sparse = false;
};

int cmd_cv(const Common& c, const CvFlags& f) {
  ModelConfig cfg = config_with_overrides(c, {}, false);
  cfg.control.trace = false;
  const auto data = training_data(cfg, c.data);
  const BoostProblem prob = make_problem(cfg, data);
  const std::size_t K = prob.family->num_params();
  CvSettings s = cfg.cv;
  if (!f.grid_max.empty()) s.grid_max = f.grid_max;
  if (s.grid_max.empty()) s.grid_max = cfg.control.mstop;
  if (s.grid_max.size() == 1) s.grid_max.assign(K, s.grid_max.front());
  if (f.grid_min > 0) s.grid_min = f.grid_min;
  if (f.length_out > 0) s.length_out = f.length_out;
  if (f.folds > 0) s.folds = f.folds;
  if (f.fraction > 0) s.fraction = f.fraction;
  if (f.sparse) s.dense_mu = false;

  const StopGrid grid = make_grid(s.grid_max, s.grid_min, s.length_out,
                                  s.log_scale, s.dense_mu);
  const FoldSet folds =
      make_folds(data->num_rows(), s.folds, s.fraction, cfg.seed);
  const CVResult cv = cv_risk(prob, grid, folds, c.cores);
  const OptimalStop best = optimal_mstop(cv);
  if (best.on_boundary) {
    warn("optimal mstop lies on the grid boundary; consider re-running the "
         "cross-validation with a wider grid");
  }

  const fs::path dir = c.out_dir;
  const auto names = prob.family->param_names();
  const std::string head = "# lssboost cv fingerprint=" +
                           fingerprint_hex(data->fingerprint()) +
                           " family=" + cfg.family + " folds=" +
                           std::to_string(s.folds) + " seed=" +
                           std::to_string(cfg.seed) + "\n";
  {
    const fs::path p = dir / "cv_risk.csv";
    auto out = open_out(p);
    out << head;
    write_cv_csv(cv, out);
    finish(out, p);
  }
  {
    const fs::path p = dir / "grid.csv";
    auto out = open_out(p);
    out << head;
    write_grid_csv(grid, names, out);
    finish(out, p);
  }
  {
    const fs::path p = dir / "folds.csv";
    auto out = open_out(p);
    out << head << "row";
    for (std::size_t b = 0; b < folds.size(); ++b) out << ",fold" << b + 1;
    out << '\n';
    for (std::size_t i = 0; i < folds.n; ++i) {
      out << i + 1;
      for (const auto& col : folds.columns) out << ',' << col[i];
      out << '\n';
    }
    finish(out, p);
  }
  {
    const fs::path p = dir / "mstop.csv";
    auto out = open_out(p);
    out << head;
    for (const auto& n : names) out << "mstop_" << n << ',';
    out << "oob_risk,on_boundary\n";
    for (int m : best.mstop) out << m << ',';
    out << format_double(best.risk) << ',' << (best.on_boundary ? 1 : 0)
        << '\n';
    finish(out, p);
  }
  std::string chosen;
  for (std::size_t k = 0; k < K; ++k) {
    chosen += (k ? " " : "") + names[k] + "=" + std::to_string(best.mstop[k]);
  }
  std::printf("optimal mstop: %s (oob risk %s)\n", chosen.c_str(),
              format_double(best.risk).c_str());

  if (!c.model.empty()) {
    ModelConfig at = cfg;
    at.control.mstop = best.mstop;
    BoostModel model = fit(make_problem(at, data));
    stamp(model, at);
    write_fit_artifacts(model, dir, c.model);
  }
  return 0;
}

BoostModel load(const Common& c) {
  if (c.model.empty()) throw InputError("--model is required");
  return load_model(c.model);
}

fs::path out_path(const Common& c, const char* name) {
  return c.out.empty() ? fs::path(c.out_dir) / name : fs::path(c.out);
}

int cmd_predict(const Common& c, const std::vector<std::string>& params,
                const std::string& type,
                const std::vector<std::string>& which) {
  const BoostModel model = load(c);
  if (c.data.empty()) throw InputError("--data is required");
  const Dataset d = read_newdata(model, c.data);
  PredictionRequest req;
  req.parameters = params;
  if (type == "response") {
    req.type = PredictType::kResponse;
  } else if (type != "link") {
    throw InputError("--type must be link or response");
  }
  if (!which.empty()) req.which = which;
  const auto cols = predict(model, d, req);
  const double scale = model_rescale(model);
  const fs::path p = out_path(c, "predictions.csv");
  auto out = open_out(p);
  out << header_comment(model, "predict type=" + type);
  out << "row";
  for (const auto& col : cols) {
    const bool response = req.type == PredictType::kResponse;
    out << ',' << csv_field(response ? col.label : "eta_" + col.label);
  }
  out << '\n';
  for (std::size_t i = 0; i < d.num_rows(); ++i) {
    out << i + 1;
    for (const auto& col : cols) {
      double v = col.values(static_cast<Eigen::Index>(i));
      if (req.type == PredictType::kResponse && !col.learner &&
          model.family().scales_with_response(col.parameter)) {
        v /= scale;
      }
      out << ',' << format_double(v);
    }
    out << '\n';
  }
  finish(out, p);
  return 0;
}

std::string level_label(double level) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", 100 * level);
  return buf;
}

int cmd_predint(const Common& c, const std::string& which,
                const std::vector<double>& pis, int points) {
  const BoostModel model = load(c);
  const auto t = predint(model, which, pis, points);
  if (!t.nested()) {
    throw NumericError("prediction intervals are not nested");
  }
  const double scale = model_rescale(model);
  const fs::path p = out_path(c, "predint.csv");
  auto out = open_out(p);
  std::string fixed;
  for (const auto& [name, value] : t.fixed) {
    fixed += " " + name + "=" + value;
  }
  std::string head = header_comment(model, "predint which=" + which);
  head.pop_back();
  out << head << (fixed.empty() ? "" : " fixed:") << fixed << '\n';
  out << csv_field(which) << ",median";
  for (const auto& b : t.rows.bands) {
    out << ",lower_" << level_label(b.level) << ",upper_"
        << level_label(b.level);
  }
  out << '\n';
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    out << format_double(t.grid[i]) << ','
        << format_double(t.rows.median[i] / scale);
    for (const auto& b : t.rows.bands) {
      out << ',' << format_double(b.lower[i] / scale) << ','
          << format_double(b.upper[i] / scale);
    }
    out << '\n';
  }
  finish(out, p);
  return 0;
}

std::string file_safe(std::string s) {
  for (char& ch : s) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' &&
        ch != '-') {
      ch = '_';
    }
  }
  while (!s.empty() && s.back() == '_') s.pop_back();
  return s;
}

int cmd_partials(const Common& c, const std::vector<std::string>& params,
                 const std::vector<std::string>& which, int points) {
  const BoostModel model = load(c);
  const auto tables = partial_effects(model, params, which, points);
  const fs::path dir = c.out_dir;
  const fs::path index = dir / "partials.csv";
  auto idx = open_out(index);
  idx << header_comment(model, "partials");
  idx << "parameter,learner,covariate,selected,file\n";
  for (const auto& t : tables) {
    const std::string file =
        "partial_" + t.param_name + "_" + file_safe(t.learner_name) + ".csv";
    idx << t.param_name << ',' << csv_field(t.learner_name) << ','
        << csv_field(t.covariate) << ',' << (t.selected ? 1 : 0) << ','
        << file << '\n';
    const fs::path p = dir / file;
    auto out = open_out(p);
    out << header_comment(model, "partial " + t.param_name + ":" +
                                     t.learner_name + " selected=" +
                                     (t.selected ? "1" : "0"));
    out << csv_field(t.covariate.empty() ? "x" : t.covariate)
        << ",effect,selected\n";
    for (Eigen::Index i = 0; i < t.effect.size(); ++i) {
      const auto ui = static_cast<std::size_t>(i);
      out << (t.type == ColumnType::kCategorical ? csv_field(t.levels[ui])
                                                 : format_double(t.x[ui]))
          << ',' << format_double(t.effect(i)) << ',' << (t.selected ? 1 : 0)
          << '\n';
    }
    finish(out, p);
  }
  finish(idx, index);
  return 0;
}

int cmd_region_summary(const Common& c, const std::string& region,
                       const std::vector<std::string>& params, bool response,
                       bool per_row) {
  BoostModel model = load(c);
  if (c.data.empty()) throw InputError("--data is required");
  const Dataset d = read_newdata(model, c.data);
  const auto sums =
      region_summary(model, d, region, params, response, !per_row);
  const fs::path p = out_path(c, "region_summary.csv");
  auto out = open_out(p);
  out << header_comment(model, "region-summary region=" + region +
                                   (response ? " scale=response"
                                             : " scale=link"));
  out << "parameter," << csv_field(region) << ",value,count\n";
  for (const auto& s : sums) {
    for (std::size_t r = 0; r < s.regions.size(); ++r) {
      out << s.param_name << ',' << csv_field(s.regions[r]) << ','
          << format_double(s.value[r]) << ',' << s.count[r] << '\n';
    }
  }
  finish(out, p);
  return 0;
}

int cmd_summary(const Common& c, const std::string& what) {
  const BoostModel model = load(c);
  const auto names = model.param_names();
  const bool all = what == "all";
  if (!all && what != "coef" && what != "selected" && what != "risk" &&
      what != "mstop" && what != "offsets") {
    throw InputError("--what must be all, coef, selected, risk, mstop or "
                     "offsets");
  }
  std::ostream& o = std::cout;
  if (all) {
    o << "family: " << model.family().name() << "\n"
      << "response: " << model.response() << "\n"
      << "rows: " << model.num_rows() << "\n"
      << "fingerprint: " << fingerprint_hex(model.data_fingerprint())
      << "\n"
      << "rescale: " << format_double(model_rescale(model)) << "\n";
  }
  if (all || what == "mstop") {
    o << "mstop:";
    for (std::size_t k = 0; k < names.size(); ++k) {
      o << ' ' << names[k] << '=' << model.mstop()[k];
    }
    o << '\n';
  }
  if (all || what == "offsets") {
    o << "offsets:";
    for (std::size_t k = 0; k < names.size(); ++k) {
      o << ' ' << names[k] << '=' << format_double(model.offsets()[k]);
    }
    o << '\n';
  }
  if (all || what == "risk") {
    const auto r = model.risk();
    if (what == "risk") {
      for (double v : r) o << format_double(v) << '\n';
    } else {
      o << "final risk: "
        << format_double(r.empty() ? model.initial_risk() : r.back()) << '\n';
    }
  }
  const auto sel = model.selected();
  const auto coef = model.coefficients();
  if (all || what == "selected") {
    for (std::size_t k = 0; k < names.size(); ++k) {
      o << "selected " << names[k] << ":";
      for (std::size_t j : sel[k]) o << ' ' << j + 1;
      o << '\n';
    }
  }
  if (all) {
    o << "selection frequencies:\n";
    for (std::size_t k = 0; k < names.size(); ++k) {
      for (std::size_t j = 0; j < model.learners()[k].size(); ++j) {
        const auto cnt = std::count(sel[k].begin(), sel[k].end(), j);
        if (cnt == 0) continue;
        char freq[32];
        std::snprintf(freq, sizeof freq, "%.3f",
                      static_cast<double>(cnt) /
                          static_cast<double>(sel[k].size()));
        o << "  " << names[k] << ' ' << model.learners()[k][j].name() << ' '
          << freq << '\n';
      }
    }
  }
  if (what == "coef") {
    for (std::size_t k = 0; k < names.size(); ++k) {
      for (std::size_t j = 0; j < coef[k].size(); ++j) {
        o << names[k] << ' ' << model.learners()[k][j].name() << ':';
        for (Eigen::Index i = 0; i < coef[k][j].size(); ++i) {
          o << ' ' << format_double(coef[k][j](i));
        }
        o << '\n';
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boosting for distributional regression (GAMLSS)"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* sub, bool data, bool config, bool model) {
    if (data) sub->add_option("--data", c.data, "CSV data file");
    if (config) sub->add_option("--config", c.config, "JSON model config");
    if (model) sub->add_option("--model", c.model, "model file");
    sub->add_option("--out-dir", c.out_dir, "output directory");
  };
  auto seed_opt = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&](const std::uint64_t& s) {
          c.seed = s;
          c.seed_given = true;
        },
        "random seed (overrides the config)");
  };

  std::vector<int> mstop;
  bool trace = false;
  auto* fit_cmd = app.add_subcommand("fit", "fit a model");
  common(fit_cmd, true, true, true);
  seed_opt(fit_cmd);
  fit_cmd->add_option("--rescale", c.rescale,
                      "multiply the response by this factor");
  fit_cmd->add_option("--mstop", mstop, "iterations per parameter");
  fit_cmd->add_flag("--trace", trace, "print iteration progress");

  CvFlags cvf;
  auto* cv_cmd = app.add_subcommand("cv", "cross-validate mstop");
  common(cv_cmd, true, true, true);
  seed_opt(cv_cmd);
  cv_cmd->add_option("--rescale", c.rescale,
                     "multiply the response by this factor");
  cv_cmd->add_option("--cores", c.cores, "parallel folds");
  cv_cmd->add_option("--grid-max", cvf.grid_max, "grid maximum per parameter");
  cv_cmd->add_option("--grid-min", cvf.grid_min, "grid minimum");
  cv_cmd->add_option("--length-out", cvf.length_out, "points per axis");
  cv_cmd->add_option("--folds", cvf.folds, "number of subsamples");
  cv_cmd->add_option("--fraction", cvf.fraction, "in-bag fraction");
  cv_cmd->add_flag("--sparse", cvf.sparse, "no dense mu grid");

  std::vector<std::string> params, which;
  std::string type = "link";
  auto* pred_cmd = app.add_subcommand("predict", "predict new data");
  common(pred_cmd, true, false, true);
  pred_cmd->add_option("--out", c.out, "output CSV");
  pred_cmd->add_option("--parameter", params, "parameters (names or 1-based)");
  pred_cmd->add_option("--type", type, "link or response");
  pred_cmd->add_option("--which", which, "learner selectors (partial)");

  std::string target;
  std::vector<double> pis{0.8, 0.9};
  int points = 150;
  auto* pi_cmd = app.add_subcommand("predint", "marginal prediction intervals");
  common(pi_cmd, false, false, true);
  pi_cmd->add_option("--out", c.out, "output CSV");
  pi_cmd->add_option("--which", target, "continuous covariate")->required();
  pi_cmd->add_option("--pi", pis, "coverage levels")->delimiter(',');
  pi_cmd->add_option("--grid-points", points, "grid size");

  auto* part_cmd = app.add_subcommand("partials", "partial effect tables");
  common(part_cmd, false, false, true);
  part_cmd->add_option("--parameter", params, "parameters");
  part_cmd->add_option("--which", which, "learner selectors");
  part_cmd->add_option("--grid-points", points, "grid size");

  std::string region;
  bool response = false, per_row = false;
  auto* reg_cmd = app.add_subcommand("region-summary",
                                     "per-region spatial effects");
  common(reg_cmd, true, false, true);
  reg_cmd->add_option("--out", c.out, "output CSV");
  reg_cmd->add_option("--region", region, "region covariate")->required();
  reg_cmd->add_option("--parameter", params, "parameters");
  reg_cmd->add_flag("--response", response, "inverse link scale");
  reg_cmd->add_flag("--per-observation", per_row, "one row per observation");

  std::string spec;
  std::size_t n = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "generate synthetic data");
  sim_cmd->add_option("--spec", spec, "generator JSON")->required();
  auto* n_opt = sim_cmd->add_option("--n", n, "rows (overrides the spec)");
  sim_cmd->add_option("--out", c.out, "output CSV");
  sim_cmd->add_option("--out-dir", c.out_dir, "output directory");
  seed_opt(sim_cmd);

  std::string what = "all";
  auto* sum_cmd = app.add_subcommand("summary", "describe a model");
  sum_cmd->add_option("--model", c.model, "model file")->required();
  sum_cmd->add_option("--what", what,
                      "all, coef, selected, risk, mstop or offsets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit_cmd) return cmd_fit(c, mstop, trace);
    if (*cv_cmd) return cmd_cv(c, cvf);
    if (*pred_cmd) return cmd_predict(c, params, type, which);
    if (*pi_cmd) return cmd_predint(c, target, pis, points);
    if (*part_cmd) return cmd_partials(c, params, which, points);
    if (*reg_cmd) {
      return cmd_region_summary(c, region, params, response, per_row);
    }
    if (*sim_cmd) return cmd_simulate(c, spec, n, n_opt->count() > 0);
    if (*sum_cmd) return cmd_summary(c, what);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
