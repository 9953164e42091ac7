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

#include "medn/curves.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "medn/io.hpp"
#include "medn/medn.hpp"

namespace medn {

std::vector<ShrinkagePoint> shrinkage_curve(std::span<const double> lambdas, double eta_max,
                                            std::size_t points) {
  if (points < 2) throw std::invalid_argument("shrinkage curve needs at least 2 points");
  if (!(eta_max > 0.0)) throw std::invalid_argument("eta_max must be > 0");
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
    if (!(eta_max * eta_max < lambda))
      throw std::domain_error("eta grid reaches +-sqrt(lambda) for lambda = " +
                              format_double(lambda));
  }
  std::vector<double> grid(points);
  for (std::size_t j = 0; j < points; ++j)
    grid[j] = -eta_max + 2.0 * eta_max * static_cast<double>(j) / static_cast<double>(points - 1);

  std::vector<ShrinkagePoint> rows;
  for (double eta : grid) rows.push_back({"gaussian", 0.0, eta, eta});
  for (double lambda : lambdas)
    for (double eta : grid) rows.push_back({"laplace", lambda, eta, shrinkage_mean(eta, lambda)});
  return rows;
}

void write_shrinkage_csv(std::ostream& out, const std::vector<ShrinkagePoint>& rows) {
  write_csv_row(out, {"prior", "lambda", "eta", "mean"});
  for (const auto& r : rows)
    write_csv_row(out, {r.prior, r.prior == "gaussian" ? std::string() : format_double(r.lambda),
                        format_double(r.eta), format_double(r.mean)});
}

double kl_norm_2d(double w1, double w2, double lambda) {
  const double w[2] = {w1, w2};
  return kl_norm(w, lambda);
}

double kl_ball_level(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("kl_ball_level: lambda must be > 0");
  const double root = std::sqrt(lambda);
  return std::sqrt(1.0 / lambda) + std::sqrt(1.0 + 1.0 / lambda) -
         std::log(std::sqrt(lambda + 1.0) / 2.0 + 0.5) / root;
}

namespace {

constexpr double kLevelTolerance = 1e-8;

BoundaryPoint kl_boundary_point(double lambda, double level, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  auto g = [&](double r) { return kl_norm_2d(r * c, r * s, lambda) - level; };

  BoundaryPoint p{"kl", lambda, theta, 0.0, 0.0, false};
  double hi = 1.0;
  for (int i = 0; i < 200 && g(hi) <= 0.0; ++i) hi *= 2.0;
  if (g(0.0) >= 0.0 || g(hi) <= 0.0) return p;

  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      g, 0.0, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  const double r = std::abs(g(a)) <= std::abs(g(b)) ? a : b;
  p.w1 = r * c;
  p.w2 = r * s;
  p.converged = std::abs(g(r)) <= kLevelTolerance;
  return p;
}

}  // namespace

std::vector<BoundaryPoint> norm_ball(const NormBallOptions& opts) {
  if (opts.points < 4) throw std::invalid_argument("norm ball needs at least 4 angles");
  std::vector<double> thetas(opts.points);
  for (std::size_t j = 0; j < opts.points; ++j)
    thetas[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(opts.points);

  std::vector<BoundaryPoint> rows;
  for (double t : thetas) {
    const double c = std::cos(t), s = std::sin(t);
    const double r = 1.0 / (std::abs(c) + std::abs(s));
    rows.push_back({"l1", 0.0, t, r * c, r * s, true});
  }
  for (double t : thetas) rows.push_back({"l2", 0.0, t, std::cos(t), std::sin(t), true});

  for (double lambda : opts.lambdas) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
    const double level = kl_norm_2d(opts.target_w1, opts.target_w2, lambda);
    if (!(level > kl_norm_2d(0.0, 0.0, lambda)))
      throw std::invalid_argument("norm-ball target must be away from the origin");
    for (double t : thetas) rows.push_back(kl_boundary_point(lambda, level, t));
  }
  return rows;
}

void write_norm_ball_csv(std::ostream& out, const std::vector<BoundaryPoint>& rows) {
  write_csv_row(out, {"norm", "lambda", "theta", "w1", "w2", "converged"});
  for (const auto& r : rows)
    write_csv_row(out, {r.norm, r.norm == "kl" ? format_double(r.lambda) : std::string(),
                        format_double(r.theta), format_double(r.w1), format_double(r.w2),
                        r.converged ? "1" : "0"});
}

}  // namespace medn
