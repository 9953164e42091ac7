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

#include "medn/medn.hpp"

#include <cmath>
#include <stdexcept>

namespace medn {

void Posterior::validate() const {
  spec.validate();
  if (mean.size() != spec.num_weights() || var_diag.size() != spec.num_weights())
    throw std::invalid_argument("Posterior: mean/variance length does not match K");
  for (double v : var_diag)
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("Posterior: variances must be positive and finite");
  if (prior.kind == PriorKind::Laplace && !(prior.lambda > 0.0))
    throw std::invalid_argument("Posterior: Laplace lambda must be > 0");
}

void LaplaceConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("LaplaceConfig: lambda must be > 0");
  if (!(C > 0.0)) throw std::invalid_argument("LaplaceConfig: C must be > 0");
  if (outer_iters < 2) throw std::invalid_argument("LaplaceConfig: outer_iters must be >= 2");
  inner.validate();
}

Posterior train_gaussian(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                         const SubgradConfig& cfg) {
  ChainModel model =
      subgradient_train(data, spec, QuadRegularizer::identity(spec.num_weights()), cfg);
  return {spec, std::move(model.weights), Vector(spec.num_weights(), 1.0), Prior::gaussian()};
}

Vector laplace_variance_update(std::span<const double> mean, std::span<const double> var,
                               double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("variance update: lambda must be > 0");
  if (mean.size() != var.size()) throw std::invalid_argument("variance update: length mismatch");
  Vector out(var.size());
  for (std::size_t k = 0; k < var.size(); ++k) {
    // <1/tau_k> = sqrt(lambda / <w_k^2>), and the new variance is its inverse.
    const double second_moment = var[k] + mean[k] * mean[k];
    out[k] = std::max(std::sqrt(second_moment / lambda), kVarianceFloor);
  }
  return out;
}

Posterior train_laplace(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                        const LaplaceConfig& cfg, std::vector<Vector>* variance_trace) {
  cfg.validate();
  spec.validate();
  const std::size_t K = spec.num_weights();

  Vector mean(K, 0.0);
  Vector var(K, 1.0);
  SubgradConfig inner = cfg.inner;
  inner.C = cfg.C * cfg.inner.C;

  for (int t = 1; t < cfg.outer_iters; ++t) {
    QuadRegularizer reg{Vector(K)};
    for (std::size_t k = 0; k < K; ++k) reg.inv_diag[k] = 1.0 / var[k];
    mean = subgradient_train(data, spec, reg, inner).weights;
    var = laplace_variance_update(mean, var, cfg.lambda);
    if (variance_trace) variance_trace->push_back(var);
  }
  return {spec, std::move(mean), std::move(var), Prior::laplace(cfg.lambda)};
}

LabelSeq predict_mean(const Posterior& post, const Matrix& x) {
  return decode(post.mean_model(), x);
}

Vector sample_weights(const Posterior& post, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector w(post.mean.size());
  for (std::size_t k = 0; k < w.size(); ++k)
    w[k] = post.mean[k] + std::sqrt(post.var_diag[k]) * normal(rng);
  return w;
}

double shrinkage_mean(double eta, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("shrinkage_mean: lambda must be > 0");
  const double gap = lambda - eta * eta;
  if (!(gap > 0.0)) throw std::domain_error("shrinkage_mean: eta^2 must be < lambda");
  return 2.0 * eta / gap;
}

namespace {

void check_dual(const DualWeights& dual, std::span<const SequenceInstance> data,
                const FeatureSpec& spec) {
  spec.validate();
  if (dual.alpha.size() != data.size())
    throw std::invalid_argument("dual weights: one map per instance required");
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i].validate(spec);
    for (const auto& [y, a] : dual.alpha[i]) {
      if (y.size() != data[i].length())
        throw std::invalid_argument("dual weights: labeling length mismatch");
      if (!(a >= 0.0) || !std::isfinite(a))
        throw std::invalid_argument("dual weights: alpha must be finite and >= 0");
    }
  }
}

// Entries of the eta vector whose square reaches lambda make Z diverge.
void check_eta_domain(std::span<const double> eta, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  for (double e : eta)
    if (!(e * e < lambda)) throw std::domain_error("log-normalizer diverges: eta_k^2 >= lambda");
}

}  // namespace

Vector dual_eta(const DualWeights& dual, std::span<const SequenceInstance> data,
                const FeatureSpec& spec) {
  check_dual(dual, data, spec);
  Vector eta(spec.num_weights(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (const auto& [y, a] : dual.alpha[i]) {
      if (a == 0.0) continue;
      accumulate_features(spec, data[i].features, data[i].labels, a, eta);
      accumulate_features(spec, data[i].features, y, -a, eta);
    }
  }
  return eta;
}

double laplace_log_z(const DualWeights& dual, std::span<const SequenceInstance> data,
                     const FeatureSpec& spec, double lambda) {
  const Vector eta = dual_eta(dual, data, spec);
  check_eta_domain(eta, lambda);
  double log_z = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    for (const auto& [y, a] : dual.alpha[i])
      log_z -= a * static_cast<double>(hamming_loss(y, data[i].labels));
  for (double e : eta) log_z += std::log(lambda) - std::log(lambda - e * e);
  return log_z;
}

std::vector<std::map<LabelSeq, double>> laplace_log_z_gradient(
    const DualWeights& dual, std::span<const SequenceInstance> data, const FeatureSpec& spec,
    double lambda) {
  const Vector eta = dual_eta(dual, data, spec);
  check_eta_domain(eta, lambda);
  Vector v(eta.size());
  for (std::size_t k = 0; k < eta.size(); ++k) v[k] = shrinkage_mean(eta[k], lambda);

  const ChainModel vmodel(spec, v);
  std::vector<std::map<LabelSeq, double>> grad(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double gold = score(vmodel, data[i].features, data[i].labels);
    for (const auto& [y, a] : dual.alpha[i]) {
      grad[i][y] = gold - score(vmodel, data[i].features, y) -
                   static_cast<double>(hamming_loss(y, data[i].labels));
    }
  }
  return grad;
}

double kl_norm(std::span<const double> mu, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("kl_norm: lambda must be > 0");
  const double root = std::sqrt(lambda);
  double sum = 0.0;
  for (double u : mu) {
    const double s = std::sqrt(lambda * u * u + 1.0);
    // sqrt(u^2 + 1/lambda) == s / sqrt(lambda); log1p keeps small |u| accurate.
    sum += (s - std::log1p((s - 1.0) / 2.0)) / root;
  }
  return sum;
}

double laplace_kl(std::span<const double> mu, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("laplace_kl: lambda must be > 0");
  double kl = 0.0;
  for (double u : mu) {
    const double s = std::sqrt(lambda * u * u + 1.0);
    // (s - 1) - log((s + 1)/2), evaluated without cancellation near u = 0.
    const double a = lambda * u * u / (s + 1.0);  // == s - 1
    kl += a - std::log1p(a / 2.0);
  }
  return kl;
}

ChainModel train_l1m3n(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                       double radius, const SubgradConfig& cfg) {
  return l1_constrained_train(data, spec, radius, cfg);
}

bool l1m3n_dual_check(const DualWeights& dual, std::span<const SequenceInstance> data,
                      const FeatureSpec& spec, double C) {
  constexpr double tol = 1e-9;
  const Vector eta = dual_eta(dual, data, spec);
  for (double e : eta)
    if (std::abs(e) > 0.5 + tol) return false;
  for (const auto& per_instance : dual.alpha) {
    double total = 0.0;
    for (const auto& [y, a] : per_instance) total += a;
    if (total > C + tol) return false;
  }
  return true;
}

}  // namespace medn
