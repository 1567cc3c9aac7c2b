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

#ifndef LSSBOOST_FAMILIES_HPP_
#define LSSBOOST_FAMILIES_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lssboost/random.hpp"

namespace lssboost {

enum class LinkKind { kIdentity, kLog, kLogit };

// Maps an additive predictor eta to a distribution parameter theta and back.
class LinkFunction {
 public:
  explicit LinkFunction(LinkKind kind) : kind_(kind) {}

  LinkKind kind() const { return kind_; }
  std::string_view name() const;

  // theta = g^{-1}(eta)
  double param_from_eta(double eta) const;
  // eta = g(theta)
  double eta_from_param(double theta) const;
  // d theta / d eta, expressed through theta.
  double dparam_deta(double theta) const;

 private:
  LinkKind kind_;
};

// A K-parameter response distribution as seen by the boosting algorithm.
//
// Every parameter vector `theta` is on the distribution scale, in the order
// given by param_names() (location first). All members are pure and the
// object is immutable, so a single instance can be shared between threads.
//
// Responses outside the support throw DomainError; nothing is clamped.
class Family {
 public:
  virtual ~Family() = default;

  const std::string& name() const { return name_; }
  std::size_t num_params() const { return links_.size(); }
  const std::vector<std::string>& param_names() const { return param_names_; }
  const LinkFunction& link(std::size_t k) const { return links_.at(k); }

  // Human readable support, e.g. "y > 0".
  virtual std::string_view response_domain() const = 0;
  virtual bool in_domain(double y) const = 0;
  void check_response(double y) const;

  virtual double loglik(double y, std::span<const double> theta) const = 0;
  // d loglik / d eta_k at theta.
  virtual double grad_eta(std::size_t k, double y,
                          std::span<const double> theta) const = 0;
  virtual double cdf(double y, std::span<const double> theta) const = 0;
  virtual double quantile(double p, std::span<const double> theta) const = 0;
  virtual double mean(std::span<const double> theta) const = 0;
  virtual double variance(std::span<const double> theta) const = 0;

  // Inversion sampling: quantile() at one uniform draw. Families may
  // override with a faster search for the same quantile.
  virtual double sample(Rng& rng, std::span<const double> theta) const {
    return quantile(rng.uniform(), theta);
  }

  // True when parameter k is measured in units of the response, i.e. it is
  // multiplied by c when y is multiplied by c.
  virtual bool scales_with_response(std::size_t k) const = 0;

  // Moment-based starting values on the parameter scale for the offset
  // search.
  virtual std::vector<double> initial_params(
      std::span<const double> y, std::span<const double> weights) const = 0;

  // Closed-form weighted MLE on the eta scale, when one exists.
  virtual bool closed_form_offset(std::span<const double> y,
                                  std::span<const double> weights,
                                  std::vector<double>& eta) const {
    (void)y;
    (void)weights;
    (void)eta;
    return false;
  }

  void params_from_etas(std::span<const double> eta,
                        std::span<double> theta) const;

 protected:
  Family(std::string name, std::vector<std::string> param_names,
         std::vector<LinkFunction> links)
      : name_(std::move(name)),
        param_names_(std::move(param_names)),
        links_(std::move(links)) {}

 private:
  std::string name_;
  std::vector<std::string> param_names_;
  std::vector<LinkFunction> links_;
};

using FamilyPtr = std::shared_ptr<const Family>;

// Normal with mean mu (identity) and standard deviation sigma (log).
FamilyPtr gaussian_family();
// Gamma with mean mu (log) and shape sigma (log): VAR = mu^2 / sigma.
FamilyPtr gamma_family();
// Negative binomial with mean mu (log) and size sigma (log):
// VAR = mu + mu^2 / sigma.
FamilyPtr negbin_family();
// Beta with mean mu (logit) and precision phi (log):
// VAR = mu (1 - mu) / (1 + phi).
FamilyPtr beta_family();
// Location-scale t with location mu (identity), scale sigma (log) and
// degrees of freedom df (log).
FamilyPtr studentt_family();

// Catalog lookup by name: gaussian, gamma, negbin, beta, studentt.
FamilyPtr make_family(std::string_view name);
std::vector<std::string> family_names();

// Weighted coordinate-wise maximum likelihood constants on the eta scale.
// Coordinates are cycled until the largest change falls below 1e-8; more
// than 100 cycles throws OffsetError.
std::vector<double> compute_offset(const Family& family,
                                   std::span<const double> y,
                                   std::span<const double> weights);

// Weighted negative log-likelihood, summed over observations with positive
// weight. `eta` is indexed [k][i].
double weighted_nll(const Family& family, std::span<const double> y,
                    std::span<const double> weights,
                    const std::vector<std::vector<double>>& eta);

}  // namespace lssboost

#endif  // LSSBOOST_FAMILIES_HPP_
