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

// Reference computations for tests. Nothing here calls into the decoding,
// training or closed-form routines it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "medn/chain.hpp"

namespace oracle {

using medn::FeatureSpec;
using medn::Label;
using medn::LabelSeq;
using medn::Matrix;
using medn::SequenceInstance;
using medn::Vector;

/// Every labeling of length L over m labels, lexicographic order.
inline std::vector<LabelSeq> all_labelings(std::size_t L, std::size_t m) {
  std::vector<LabelSeq> out;
  LabelSeq y(L, 0);
  while (true) {
    out.push_back(y);
    std::size_t pos = L;
    while (pos > 0) {
      --pos;
      if (static_cast<std::size_t>(++y[pos]) < m) break;
      y[pos] = 0;
      if (pos == 0) return out;
    }
    if (L == 0) return out;
  }
}

/// w'f(x, y) summed term by term from the weight layout, no feature vector.
inline double score(const FeatureSpec& spec, const Vector& w, const Matrix& x, const LabelSeq& y) {
  double s = 0.0;
  for (std::size_t l = 0; l < y.size(); ++l) {
    for (std::size_t k = 0; k < spec.d; ++k) s += x(l, k) * w[k * spec.m + static_cast<std::size_t>(y[l])];
    if (l + 1 < y.size())
      s += w[spec.d * spec.m + static_cast<std::size_t>(y[l]) * spec.m + static_cast<std::size_t>(y[l + 1])];
  }
  return s;
}

inline std::size_t mismatches(const LabelSeq& a, const LabelSeq& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

struct Best {
  LabelSeq labels;
  double value = -std::numeric_limits<double>::infinity();
};

inline Best brute_argmax(const FeatureSpec& spec, const Vector& w, const Matrix& x,
                         const LabelSeq* gold = nullptr) {
  Best best;
  for (const auto& y : all_labelings(x.rows(), spec.m)) {
    double v = score(spec, w, x, y);
    if (gold) v += static_cast<double>(mismatches(y, *gold));
    if (v > best.value) best = {y, v};
  }
  return best;
}

/// Exact p(y | x) proportional to exp(w'f(x, y)), in all_labelings order.
inline std::vector<double> chain_distribution(const FeatureSpec& spec, const Vector& w, const Matrix& x) {
  const auto ys = all_labelings(x.rows(), spec.m);
  std::vector<double> logp;
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& y : ys) {
    logp.push_back(score(spec, w, x, y));
    hi = std::max(hi, logp.back());
  }
  double z = 0.0;
  for (double& v : logp) z += (v = std::exp(v - hi));
  for (double& v : logp) v /= z;
  return logp;
}

inline std::size_t labeling_index(const LabelSeq& y, std::size_t m) {
  std::size_t idx = 0;
  for (Label c : y) idx = idx * m + static_cast<std::size_t>(c);
  return idx;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix x(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) x(r, c) = n(rng);
  return x;
}

inline Vector random_vector(std::size_t k, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> n(0.0, sd);
  Vector v(k);
  for (double& e : v) e = n(rng);
  return v;
}

inline LabelSeq random_labels(std::size_t L, std::size_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<Label> u(0, static_cast<Label>(m) - 1);
  LabelSeq y(L);
  for (auto& c : y) c = u(rng);
  return y;
}

/// Posterior mean of w under the tilted Laplace density
/// (sqrt(lambda)/2) exp(-sqrt(lambda)|w|) exp(eta w), by quadrature of both
/// half lines.
inline double tilted_laplace_mean(double eta, double lambda) {
  const double r = std::sqrt(lambda);
  boost::math::quadrature::exp_sinh<double> integrator;
  auto right = [&](double w) { return std::exp(-(r - eta) * w); };
  auto left = [&](double w) { return std::exp(-(r + eta) * w); };
  auto right_w = [&](double w) { return w * std::exp(-(r - eta) * w); };
  auto left_w = [&](double w) { return w * std::exp(-(r + eta) * w); };
  const double z = integrator.integrate(right) + integrator.integrate(left);
  const double m1 = integrator.integrate(right_w) - integrator.integrate(left_w);
  return m1 / z;
}

/// <1/tau> under q(tau) proportional to N(sqrt(s) | 0, tau) exp(-lambda tau / 2).
inline double inverse_tau_expectation(double second_moment, double lambda) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto density = [&](double tau) {
    return std::exp(-second_moment / (2.0 * tau) - lambda * tau / 2.0) / std::sqrt(tau);
  };
  auto weighted = [&](double tau) { return density(tau) / tau; };
  return integrator.integrate(weighted) / integrator.integrate(density);
}

/// Explicit PAC-Bayes bound evaluated in 50-digit decimal arithmetic.
inline double pac_bound_high_precision(double N, double y_card, double c, double gamma, double kl,
                                       double delta, double emp, std::uint64_t* m_out = nullptr) {
  using F = boost::multiprecision::cpp_dec_float_50;
  const F n(N), y(y_card), cc(c), g(gamma), k(kl), d(delta), e(emp);
  const F m = ceil(F(16) * cc * cc / (g * g) * log(n * y * y / (k + 1)));
  if (m_out) *m_out = m.convert_to<std::uint64_t>();
  const F second = y * exp(-m * g * g / (F(32) * cc * cc));
  const F third = sqrt((m * k + log(n) + F(3) * log((m + 1) / d) + 2) / (F(2) * n - 1));
  return (e + second + third).convert_to<double>();
}

/// Projection onto the L1 ball by bisection on the soft-threshold level,
/// i.e. solving the KKT condition sum_i max(|v_i| - theta, 0) = radius.
inline Vector l1_projection_bisection(const Vector& v, double radius) {
  double norm1 = 0.0, hi = 0.0;
  for (double x : v) {
    norm1 += std::abs(x);
    hi = std::max(hi, std::abs(x));
  }
  if (norm1 <= radius) return v;
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (double x : v) s += std::max(std::abs(x) - mid, 0.0);
    (s > radius ? lo : hi) = mid;
  }
  const double theta = 0.5 * (lo + hi);
  Vector u(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    u[i] = std::copysign(std::max(std::abs(v[i]) - theta, 0.0), v[i]);
  return u;
}

}  // namespace oracle
