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

// Stochastic subgradient training of the structured hinge objective
//
//   R(w) + C * sum_i ( max_y [w'f(x_i, y) + hamming(y, y_i)] - w'f(x_i, y_i) )
//
// where R is either a diagonal quadratic 1/2 w' S^{-1} w or the indicator of
// an L1 ball. Step size at global step t is 1/(2 beta sqrt(t)).

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>

#include "medn/chain.hpp"

namespace medn {

/// Which point of the trajectory a trainer returns.
enum class IterateOutput {
  TailAverage,  // mean of the iterates over the second half of the passes
  Final,
};

struct SubgradConfig {
  double beta = 1.0;
  int iterations = 100;  // passes over the data
  double C = 200.0;
  std::uint64_t seed = 0;
  IterateOutput output = IterateOutput::TailAverage;

  /// Step size and slack penalty as paired by the online subgradient recipe:
  /// alpha_t = 1/(2 beta sqrt(t)), C = 200 beta.
  static SubgradConfig from_beta(double beta, int iterations, std::uint64_t seed) {
    return {beta, iterations, 200.0 * beta, seed, IterateOutput::TailAverage};
  }

  void validate() const;
};

/// Diagonal of S^{-1} for the quadratic regularizer 1/2 w' S^{-1} w.
struct QuadRegularizer {
  Vector inv_diag;

  static QuadRegularizer identity(std::size_t k) { return {Vector(k, 1.0)}; }
  void validate(std::size_t k) const;
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structured hinge loss of one instance: max_y [w'f + loss] - w'f(gold) >= 0.
double structured_hinge(const ChainModel& model, const SequenceInstance& instance);

/// 1/2 w' S^{-1} w + C * sum_i hinge_i.
double quad_objective(std::span<const SequenceInstance> data, const ChainModel& model,
                      const QuadRegularizer& reg, double C);

/// Called after every hinge step with the step size and the dataset size.
/// Implements the regularizer part of the update in place.
using RegularizerStep = std::function<void(std::span<double> w, double step, std::size_t n)>;

/// Generic per-instance subgradient loop. Instances are shuffled once per pass
/// with cfg.seed. Returns the final iterate or the average of every iterate in
/// passes [iterations/2, iterations), per cfg.output. Throws TrainingDiverged
/// when ||w||_2 exceeds 1e8 or turns non-finite.
ChainModel run_subgradient(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                           const SubgradConfig& cfg, const RegularizerStep& regularize);

ChainModel subgradient_train(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                             const QuadRegularizer& reg, const SubgradConfig& cfg);

/// Euclidean projection onto {u : ||u||_1 <= radius} by sorting magnitudes
/// and soft-thresholding at the KKT threshold.
Vector l1_ball_project(std::span<const double> v, double radius);

ChainModel l1_constrained_train(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                                double radius, const SubgradConfig& cfg);

}  // namespace medn
