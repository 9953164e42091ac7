// Copyright 2026 The medn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Maximum entropy discrimination Markov networks over linear chains.
//
// Gaussian prior: the posterior mean is the M3N point estimate, unit variance.
// Laplace prior: variational alternation between a variance-weighted M3N
// solve and a closed-form coordinatewise variance update.

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "medn/chain.hpp"
#include "medn/optimize.hpp"

namespace medn {

enum class PriorKind { Gaussian, Laplace };

struct Prior {
  PriorKind kind = PriorKind::Gaussian;
  double lambda = 0.0;  // Laplace only

  static Prior gaussian() { return {PriorKind::Gaussian, 0.0}; }
  static Prior laplace(double lambda) { return {PriorKind::Laplace, lambda}; }
};

/// Diagonal Gaussian posterior over chain weights.
struct Posterior {
  FeatureSpec spec;
  Vector mean;
  Vector var_diag;
  Prior prior;

  void validate() const;
  ChainModel mean_model() const { return ChainModel(spec, mean); }
};

struct LaplaceConfig {
  double lambda = 1.0;
  double C = 1.0;       // multiplies inner.C
  int outer_iters = 3;  // T; runs T-1 rounds
  SubgradConfig inner;

  void validate() const;
};

/// Floor applied to updated variances so that S^{-1} stays finite.
inline constexpr double kVarianceFloor = 1e-12;

/// Per-instance sparse dual weights alpha_i(y) over alternative labelings.
struct DualWeights {
  std::vector<std::map<LabelSeq, double>> alpha;
};

Posterior train_gaussian(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                         const SubgradConfig& cfg);

/// Records the variance vector after each outer round when non-null.
Posterior train_laplace(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                        const LaplaceConfig& cfg, std::vector<Vector>* variance_trace = nullptr);

/// One variance update: sqrt((var + mean^2) / lambda), floored.
Vector laplace_variance_update(std::span<const double> mean, std::span<const double> var,
                               double lambda);

/// Averaging prediction rule. F is linear in w, so the posterior-averaged
/// score is mean'f(x, y) and the argmax is a plain decode.
LabelSeq predict_mean(const Posterior& post, const Matrix& x);

/// Draws one weight vector from the diagonal posterior.
Vector sample_weights(const Posterior& post, std::mt19937_64& rng);

/// Posterior mean under a Laplace prior: 2 eta / (lambda - eta^2).
/// Throws std::domain_error when eta^2 >= lambda.
double shrinkage_mean(double eta, double lambda);

/// eta = sum_{i,y} alpha_i(y) (f(x_i, y_i) - f(x_i, y)).
Vector dual_eta(const DualWeights& dual, std::span<const SequenceInstance> data,
                const FeatureSpec& spec);

/// log Z(alpha) = -sum alpha_i(y) loss_i(y) + sum_k log(lambda / (lambda - eta_k^2)).
double laplace_log_z(const DualWeights& dual, std::span<const SequenceInstance> data,
                     const FeatureSpec& spec, double lambda);

/// d log Z / d alpha_i(y) = v' df_i(y) - loss_i(y), v_k = 2 eta_k / (lambda - eta_k^2).
/// Same shape as dual.alpha.
std::vector<std::map<LabelSeq, double>> laplace_log_z_gradient(
    const DualWeights& dual, std::span<const SequenceInstance> data, const FeatureSpec& spec,
    double lambda);

/// sum_k ( sqrt(mu_k^2 + 1/lambda) - log((sqrt(lambda mu_k^2 + 1) + 1) / 2) / sqrt(lambda) )
double kl_norm(std::span<const double> mu, double lambda);

/// KL(p || p0) of the Laplace solution with mean mu: sqrt(lambda) kl_norm(mu) - K.
double laplace_kl(std::span<const double> mu, double lambda);

ChainModel train_l1m3n(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                       double radius, const SubgradConfig& cfg);

/// Feasibility of the L1-M3N dual: |eta_k| <= 1/2 for all k and
/// sum_y alpha_i(y) <= C per instance, each within 1e-9.
bool l1m3n_dual_check(const DualWeights& dual, std::span<const SequenceInstance> data,
                      const FeatureSpec& spec, double C);

}  // namespace medn
