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

#include "medn/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace medn {

namespace {

constexpr double kDivergenceNorm = 1e8;

void check_data(std::span<const SequenceInstance> data, const FeatureSpec& spec) {
  spec.validate();
  if (data.empty()) throw std::invalid_argument("training data is empty");
  for (const auto& inst : data) inst.validate(spec);
}

}  // namespace

void SubgradConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be > 0");
  if (!(C >= 0.0) || !std::isfinite(C)) throw std::invalid_argument("C must be >= 0");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
}

void QuadRegularizer::validate(std::size_t k) const {
  if (inv_diag.size() != k)
    throw std::invalid_argument("regularizer length " + std::to_string(inv_diag.size()) +
                                " != K " + std::to_string(k));
  for (double v : inv_diag)
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("regularizer entries must be positive and finite");
}

double structured_hinge(const ChainModel& model, const SequenceInstance& instance) {
  const auto aug = loss_augmented_decode(model, instance);
  return std::max(0.0, aug.value - score(model, instance.features, instance.labels));
}

double quad_objective(std::span<const SequenceInstance> data, const ChainModel& model,
                      const QuadRegularizer& reg, double C) {
  reg.validate(model.weights.size());
  double r = 0.0;
  for (std::size_t k = 0; k < model.weights.size(); ++k)
    r += 0.5 * reg.inv_diag[k] * model.weights[k] * model.weights[k];
  double hinge = 0.0;
  for (const auto& inst : data) hinge += structured_hinge(model, inst);
  return r + C * hinge;
}

ChainModel run_subgradient(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                           const SubgradConfig& cfg, const RegularizerStep& regularize) {
  check_data(data, spec);
  cfg.validate();

  ChainModel model(spec);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.seed);

  const bool averaging = cfg.output == IterateOutput::TailAverage;
  const int first_averaged_pass = cfg.iterations / 2;
  Vector sum(averaging ? model.weights.size() : 0, 0.0);
  std::uint64_t summed = 0;

  std::uint64_t t = 0;
  for (int pass = 0; pass < cfg.iterations; ++pass) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t idx : order) {
      ++t;
      const double step = 1.0 / (2.0 * cfg.beta * std::sqrt(static_cast<double>(t)));
      const SequenceInstance& inst = data[idx];
      const auto aug = loss_augmented_decode(model, inst);
      if (aug.labels != inst.labels && cfg.C > 0.0) {
        // subgradient of the hinge: f(x, y_hat) - f(x, y_i)
        accumulate_features(spec, inst.features, aug.labels, -step * cfg.C, model.weights);
        accumulate_features(spec, inst.features, inst.labels, step * cfg.C, model.weights);
      }
      regularize(model.weights, step, data.size());

      double norm2 = 0.0;
      for (double v : model.weights) norm2 += v * v;
      if (!std::isfinite(norm2) || norm2 > kDivergenceNorm * kDivergenceNorm)
        throw TrainingDiverged("weight norm exceeded 1e8 at step " + std::to_string(t));

      if (averaging && pass >= first_averaged_pass) {
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += model.weights[k];
        ++summed;
      }
    }
  }
  if (averaging) {
    for (std::size_t k = 0; k < sum.size(); ++k)
      model.weights[k] = sum[k] / static_cast<double>(summed);
  }
  return model;
}

ChainModel subgradient_train(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                             const QuadRegularizer& reg, const SubgradConfig& cfg) {
  reg.validate(spec.num_weights());
  // Each instance carries 1/n of the regularizer. The quadratic part is taken
  // as an implicit (proximal) step so very large S^{-1} entries stay stable.
  return run_subgradient(data, spec, cfg, [&reg](std::span<double> w, double step, std::size_t n) {
    const double scale = step / static_cast<double>(n);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] /= 1.0 + scale * reg.inv_diag[k];
  });
}

Vector l1_ball_project(std::span<const double> v, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("l1_ball_project: radius must be > 0");
  double norm1 = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("l1_ball_project: non-finite input");
    norm1 += std::abs(x);
  }
  if (norm1 <= radius) return Vector(v.begin(), v.end());

  Vector mag(v.size());
  std::transform(v.begin(), v.end(), mag.begin(), [](double x) { return std::abs(x); });
  std::sort(mag.begin(), mag.end(), std::greater<>());

  // theta = (sum of the rho largest magnitudes - radius) / rho for the largest
  // rho with mag[rho-1] > theta.
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < mag.size(); ++j) {
    cumsum += mag[j];
    const double candidate = (cumsum - radius) / static_cast<double>(j + 1);
    if (mag[j] > candidate) theta = candidate;
    else break;
  }

  Vector u(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double shrunk = std::max(std::abs(v[i]) - theta, 0.0);
    u[i] = std::copysign(shrunk, v[i]);
  }
  // Rounding can leave the sum a few ulps above the radius; pull it back in so
  // that a second projection is the identity.
  auto l1 = [&u] {
    double s = 0.0;
    for (double x : u) s += std::abs(x);
    return s;
  };
  for (int guard = 0; guard < 16; ++guard) {
    const double out1 = l1();
    if (out1 <= radius) break;
    double s = radius / out1;
    if (guard > 0) s = std::nextafter(s, 0.0);
    for (double& x : u) x *= s;
  }
  return u;
}

ChainModel l1_constrained_train(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                                double radius, const SubgradConfig& cfg) {
  if (!(radius > 0.0)) throw std::invalid_argument("l1_constrained_train: radius must be > 0");
  ChainModel model =
      run_subgradient(data, spec, cfg, [radius](std::span<double> w, double, std::size_t) {
        const Vector u = l1_ball_project(w, radius);
        std::copy(u.begin(), u.end(), w.begin());
      });
  // An average of feasible iterates is feasible up to rounding.
  model.weights = l1_ball_project(model.weights, radius);
  return model;
}

}  // namespace medn
