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

// Tabular data for the posterior-mean shrinkage curves and the 2-D
// norm-ball boundaries (L1, L2 and the KL-norm of a Laplace prior).

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace medn {

struct ShrinkagePoint {
  std::string prior;  // "gaussian" or "laplace"
  double lambda = 0.0;  // 0 for the Gaussian row
  double eta = 0.0;
  double mean = 0.0;
};

/// Evenly spaced eta in [-eta_max, eta_max]; Gaussian identity rows followed
/// by one Laplace curve per lambda. Throws std::domain_error if eta_max^2 is
/// not strictly below every lambda.
std::vector<ShrinkagePoint> shrinkage_curve(std::span<const double> lambdas, double eta_max,
                                            std::size_t points);

void write_shrinkage_csv(std::ostream& out, const std::vector<ShrinkagePoint>& rows);

/// KL-norm of (w1, w2).
double kl_norm_2d(double w1, double w2, double lambda);

/// Level b of the KL-norm ball whose boundary passes through (0, 1):
/// sqrt(1/lambda) + sqrt(1 + 1/lambda) - log(sqrt(lambda + 1)/2 + 1/2) / sqrt(lambda).
double kl_ball_level(double lambda);

struct BoundaryPoint {
  std::string norm;  // "l1", "l2" or "kl"
  double lambda = 0.0;
  double theta = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
  bool converged = true;
};

struct NormBallOptions {
  std::vector<double> lambdas{1.0, 4.0, 16.0, 100.0};
  double target_w1 = 0.0;  // the KL boundary is drawn through this point
  double target_w2 = 1.0;
  std::size_t points = 360;  // angles 2*pi*j/points
};

/// Unit L1 and L2 balls, then the KL-norm boundary {kl_norm_2d = b} for each
/// lambda with b = kl_norm_2d(target), one radial root per angle.
std::vector<BoundaryPoint> norm_ball(const NormBallOptions& opts);

void write_norm_ball_csv(std::ostream& out, const std::vector<BoundaryPoint>& rows);

}  // namespace medn
