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

#include "medn/chain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace medn {

void FeatureSpec::validate() const {
  if (d < 1) throw std::invalid_argument("FeatureSpec: d must be >= 1");
  if (m < 2) throw std::invalid_argument("FeatureSpec: m must be >= 2");
}

void SequenceInstance::validate(const FeatureSpec& spec) const {
  if (labels.empty()) throw std::invalid_argument("SequenceInstance: empty sequence");
  if (features.rows() != labels.size())
    throw std::invalid_argument("SequenceInstance: " + std::to_string(features.rows()) +
                                " feature rows for " + std::to_string(labels.size()) + " labels");
  if (features.cols() != spec.d)
    throw std::invalid_argument("SequenceInstance: feature width " +
                                std::to_string(features.cols()) + " != d " +
                                std::to_string(spec.d));
  for (Label y : labels)
    if (y < 0 || static_cast<std::size_t>(y) >= spec.m)
      throw std::invalid_argument("SequenceInstance: label " + std::to_string(y) +
                                  " out of range");
  for (double v : features.data())
    if (!std::isfinite(v)) throw std::invalid_argument("SequenceInstance: non-finite feature");
}

ChainModel::ChainModel(FeatureSpec s, Vector w) : spec(s), weights(std::move(w)) {
  spec.validate();
  if (weights.size() != spec.num_weights())
    throw std::invalid_argument("ChainModel: weight length " + std::to_string(weights.size()) +
                                " != K " + std::to_string(spec.num_weights()));
  for (double v : weights)
    if (!std::isfinite(v)) throw std::invalid_argument("ChainModel: non-finite weight");
}

namespace {

void check_shapes(const FeatureSpec& spec, const Matrix& x, std::span<const Label> y) {
  if (x.rows() != y.size())
    throw std::invalid_argument("feature rows " + std::to_string(x.rows()) +
                                " != label count " + std::to_string(y.size()));
  if (x.cols() != spec.d)
    throw std::invalid_argument("feature width " + std::to_string(x.cols()) + " != d " +
                                std::to_string(spec.d));
  for (Label c : y)
    if (c < 0 || static_cast<std::size_t>(c) >= spec.m)
      throw std::invalid_argument("label " + std::to_string(c) + " out of range");
}

// Node potentials psi(l, c) = sum_k x_{l,k} w_{k,c}, stored L x m.
Matrix node_potentials(const ChainModel& model, const Matrix& x) {
  const FeatureSpec& spec = model.spec;
  if (x.cols() != spec.d)
    throw std::invalid_argument("feature width " + std::to_string(x.cols()) + " != d " +
                                std::to_string(spec.d));
  if (model.weights.size() != spec.num_weights())
    throw std::invalid_argument("model weight length does not match spec");
  Matrix psi(x.rows(), spec.m);
  for (std::size_t l = 0; l < x.rows(); ++l) {
    for (std::size_t k = 0; k < spec.d; ++k) {
      const double xv = x(l, k);
      if (xv == 0.0) continue;
      for (std::size_t c = 0; c < spec.m; ++c) psi(l, c) += xv * model.weights[k * spec.m + c];
    }
  }
  return psi;
}

struct ViterbiResult {
  LabelSeq labels;
  double value;
};

ViterbiResult viterbi(const ChainModel& model, const Matrix& psi) {
  const std::size_t L = psi.rows();
  const std::size_t m = model.spec.m;
  const double* trans = model.weights.data() + model.spec.num_state();

  Matrix delta(L, m);
  std::vector<Label> back(L * m, 0);
  for (std::size_t c = 0; c < m; ++c) delta(0, c) = psi(0, c);
  for (std::size_t l = 1; l < L; ++l) {
    for (std::size_t c = 0; c < m; ++c) {
      Label best = 0;
      double best_val = delta(l - 1, 0) + trans[c];
      for (std::size_t p = 1; p < m; ++p) {
        const double v = delta(l - 1, p) + trans[p * m + c];
        if (v > best_val) {
          best_val = v;
          best = static_cast<Label>(p);
        }
      }
      delta(l, c) = best_val + psi(l, c);
      back[l * m + c] = best;
    }
  }

  Label last = 0;
  for (std::size_t c = 1; c < m; ++c)
    if (delta(L - 1, c) > delta(L - 1, static_cast<std::size_t>(last))) last = static_cast<Label>(c);

  ViterbiResult out{LabelSeq(L), delta(L - 1, static_cast<std::size_t>(last))};
  out.labels[L - 1] = last;
  for (std::size_t l = L - 1; l > 0; --l)
    out.labels[l - 1] = back[l * m + static_cast<std::size_t>(out.labels[l])];
  return out;
}

}  // namespace

void accumulate_features(const FeatureSpec& spec, const Matrix& x, std::span<const Label> y,
                         double scale, std::span<double> out) {
  check_shapes(spec, x, y);
  if (out.size() != spec.num_weights())
    throw std::invalid_argument("output length does not match K");
  for (std::size_t l = 0; l < y.size(); ++l) {
    const auto row = x.row(l);
    for (std::size_t k = 0; k < spec.d; ++k) out[spec.state_index(k, y[l])] += scale * row[k];
    if (l + 1 < y.size()) out[spec.transition_index(y[l], y[l + 1])] += scale;
  }
}

Vector feature_vector(const FeatureSpec& spec, const Matrix& x, std::span<const Label> y) {
  Vector f(spec.num_weights(), 0.0);
  accumulate_features(spec, x, y, 1.0, f);
  return f;
}

double score(const ChainModel& model, const Matrix& x, std::span<const Label> y) {
  const FeatureSpec& spec = model.spec;
  check_shapes(spec, x, y);
  if (model.weights.size() != spec.num_weights())
    throw std::invalid_argument("model weight length does not match spec");
  double s = 0.0;
  for (std::size_t l = 0; l < y.size(); ++l) {
    const auto row = x.row(l);
    for (std::size_t k = 0; k < spec.d; ++k) s += row[k] * model.weights[spec.state_index(k, y[l])];
    if (l + 1 < y.size()) s += model.weights[spec.transition_index(y[l], y[l + 1])];
  }
  return s;
}

LabelSeq decode(const ChainModel& model, const Matrix& x) {
  if (x.rows() == 0) throw std::invalid_argument("decode: empty input sequence");
  return viterbi(model, node_potentials(model, x)).labels;
}

AugmentedDecode loss_augmented_decode(const ChainModel& model, const SequenceInstance& instance) {
  const Matrix& x = instance.features;
  if (x.rows() == 0 || x.rows() != instance.labels.size())
    throw std::invalid_argument("loss_augmented_decode: malformed instance");
  Matrix psi = node_potentials(model, x);
  for (std::size_t l = 0; l < psi.rows(); ++l)
    for (std::size_t c = 0; c < psi.cols(); ++c)
      if (static_cast<Label>(c) != instance.labels[l]) psi(l, c) += 1.0;
  auto [labels, value] = viterbi(model, psi);
  return {std::move(labels), value};
}

std::size_t hamming_loss(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("hamming_loss: length " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i] ? 1 : 0;
  return n;
}

}  // namespace medn
