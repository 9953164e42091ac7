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

// Synthetic sequence data drawn from random linear-chain CRFs: standard normal
// (optionally group-correlated) input features, labels from a Gibbs sampler.

#include <cstdint>
#include <random>
#include <vector>

#include "medn/chain.hpp"

namespace medn {

struct GeneratorConfig {
  std::size_t d = 20;
  std::size_t d_rel = 5;
  std::size_t L = 8;
  std::size_t m = 2;
  std::size_t n_samples = 250;
  int gibbs_iters = 500;  // full systematic sweeps per sequence
  bool correlated = false;
  std::size_t group_size = 3;
  double noise_sd = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
  FeatureSpec spec() const { return {d, m}; }
};

/// Generating model. The first d_rel input features are the relevant ones.
struct TrueCrf {
  ChainModel model;
  std::vector<std::size_t> relevant;
};

TrueCrf gen_crf(const GeneratorConfig& cfg);

Matrix gen_features(const GeneratorConfig& cfg, std::mt19937_64& rng);

/// Systematic-scan Gibbs chain over the labels of one sequence under
/// p(y | x) proportional to exp(w'f(x, y)).
class GibbsChain {
 public:
  /// Starts from a uniformly random labeling drawn from seed.
  GibbsChain(const ChainModel& model, const Matrix& x, std::uint64_t seed);

  /// Resamples positions 0..L-1 in order from their exact conditionals.
  void sweep();
  const LabelSeq& state() const { return state_; }

 private:
  const ChainModel& model_;
  Matrix node_;  // L x m node potentials
  LabelSeq state_;
  std::mt19937_64 rng_;
  std::vector<double> logits_;
};

LabelSeq gibbs_label(const TrueCrf& crf, const Matrix& x, int sweeps, std::uint64_t seed);

struct SyntheticDataset {
  GeneratorConfig config;
  TrueCrf truth;
  std::vector<SequenceInstance> instances;
};

SyntheticDataset gen_dataset(const GeneratorConfig& cfg);

}  // namespace medn
