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

#include "medn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "medn/rng.hpp"

namespace medn {

namespace {

// Stream ids keep the model, the features and each Gibbs chain on separate
// engines derived from the one configured seed.
constexpr std::uint64_t kModelStream = 0;
constexpr std::uint64_t kFeatureStream = 1;
constexpr std::uint64_t kGibbsStreamBase = 1000;

}  // namespace

void GeneratorConfig::validate() const {
  if (d < 1) throw std::invalid_argument("generator: d must be >= 1");
  if (m < 2) throw std::invalid_argument("generator: m must be >= 2");
  if (L < 1) throw std::invalid_argument("generator: L must be >= 1");
  if (d_rel > d) throw std::invalid_argument("generator: d_rel must be <= d");
  if (gibbs_iters < 1) throw std::invalid_argument("generator: gibbs_iters must be >= 1");
  if (correlated) {
    if (group_size < 1 || d_rel % group_size != 0)
      throw std::invalid_argument("generator: group_size must divide d_rel");
    if (!(noise_sd > 0.0)) throw std::invalid_argument("generator: noise_sd must be > 0");
  }
}

TrueCrf gen_crf(const GeneratorConfig& cfg) {
  cfg.validate();
  const FeatureSpec spec = cfg.spec();
  std::mt19937_64 rng(derive_seed(cfg.seed, kModelStream));
  std::normal_distribution<double> normal(0.0, 1.0);

  TrueCrf crf{ChainModel(spec), {}};
  for (std::size_t k = 0; k < cfg.d_rel; ++k) {
    crf.relevant.push_back(k);
    for (std::size_t c = 0; c < cfg.m; ++c)
      crf.model.weights[spec.state_index(k, static_cast<Label>(c))] = normal(rng);
  }
  for (std::size_t a = 0; a < cfg.m; ++a)
    for (std::size_t b = 0; b < cfg.m; ++b)
      crf.model.weights[spec.transition_index(static_cast<Label>(a), static_cast<Label>(b))] =
          normal(rng);
  return crf;
}

Matrix gen_features(const GeneratorConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(cfg.L, cfg.d);
  for (std::size_t l = 0; l < cfg.L; ++l) {
    std::size_t k = 0;
    if (cfg.correlated) {
      for (; k < cfg.d_rel; k += cfg.group_size) {
        const double base = normal(rng);
        for (std::size_t j = 0; j < cfg.group_size; ++j)
          x(l, k + j) = base + cfg.noise_sd * normal(rng);
      }
    }
    for (; k < cfg.d; ++k) x(l, k) = normal(rng);
  }
  return x;
}

GibbsChain::GibbsChain(const ChainModel& model, const Matrix& x, std::uint64_t seed)
    : model_(model), node_(x.rows(), model.spec.m), state_(x.rows()), rng_(seed),
      logits_(model.spec.m) {
  const FeatureSpec& spec = model.spec;
  if (x.rows() == 0) throw std::invalid_argument("Gibbs: empty sequence");
  if (x.cols() != spec.d) throw std::invalid_argument("Gibbs: feature width != d");
  for (std::size_t l = 0; l < x.rows(); ++l)
    for (std::size_t k = 0; k < spec.d; ++k)
      for (std::size_t c = 0; c < spec.m; ++c)
        node_(l, c) += x(l, k) * model.weights[spec.state_index(k, static_cast<Label>(c))];
  std::uniform_int_distribution<Label> uniform(0, static_cast<Label>(spec.m) - 1);
  for (auto& y : state_) y = uniform(rng_);
}

void GibbsChain::sweep() {
  const FeatureSpec& spec = model_.spec;
  const std::size_t L = state_.size();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t l = 0; l < L; ++l) {
    double hi = -INFINITY;
    for (std::size_t c = 0; c < spec.m; ++c) {
      const Label lc = static_cast<Label>(c);
      double s = node_(l, c);
      if (l > 0) s += model_.weights[spec.transition_index(state_[l - 1], lc)];
      if (l + 1 < L) s += model_.weights[spec.transition_index(lc, state_[l + 1])];
      logits_[c] = s;
      hi = std::max(hi, s);
    }
    double total = 0.0;
    for (double& v : logits_) {
      v = std::exp(v - hi);
      total += v;
    }
    double u = unit(rng_) * total;
    Label pick = static_cast<Label>(spec.m) - 1;
    for (std::size_t c = 0; c < spec.m; ++c) {
      u -= logits_[c];
      if (u < 0.0) {
        pick = static_cast<Label>(c);
        break;
      }
    }
    state_[l] = pick;
  }
}

LabelSeq gibbs_label(const TrueCrf& crf, const Matrix& x, int sweeps, std::uint64_t seed) {
  if (sweeps < 1) throw std::invalid_argument("gibbs_label: sweeps must be >= 1");
  GibbsChain chain(crf.model, x, seed);
  for (int s = 0; s < sweeps; ++s) chain.sweep();
  return chain.state();
}

SyntheticDataset gen_dataset(const GeneratorConfig& cfg) {
  cfg.validate();
  SyntheticDataset out{cfg, gen_crf(cfg), {}};
  out.instances.reserve(cfg.n_samples);
  std::mt19937_64 feature_rng(derive_seed(cfg.seed, kFeatureStream));
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    Matrix x = gen_features(cfg, feature_rng);
    LabelSeq y = gibbs_label(out.truth, x, cfg.gibbs_iters, derive_seed(cfg.seed, kGibbsStreamBase + i));
    out.instances.push_back({std::move(x), std::move(y)});
  }
  return out;
}

}  // namespace medn
