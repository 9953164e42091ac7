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

// Inverted K-fold cross-validation with a hyperparameter grid: each run trains
// on a single fold and tests on the remaining K-1 folds.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "medn/metrics.hpp"
#include "medn/models.hpp"

namespace medn {

struct CvOptions {
  std::size_t folds = 5;
  std::vector<ModelKind> models{ModelKind::M3N, ModelKind::LapMEDN, ModelKind::L1M3N};
  std::vector<double> lambdas{9, 16, 25, 36, 49, 64};
  std::vector<double> betas{1, 10, 20, 30, 40, 50, 60};
  std::vector<double> radii{10.0};
  int iterations = 50;
  int outer_iters = 3;
  double lap_C = 1.0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct CvRow {
  ModelKind model = ModelKind::M3N;
  std::string fold;  // fold index, or "mean" for aggregate rows
  double lambda = 0.0;  // 0 where the family has no lambda
  double beta = 0.0;
  double radius = 0.0;  // 0 where the family has no radius
  std::size_t n_train = 0;
  MetricsReport metrics;
};

/// Fold id of every instance after a seeded shuffle; folds differ in size by
/// at most one. Throws when folds < 2 or folds > n.
std::vector<std::size_t> assign_folds(std::size_t n, std::size_t folds, std::uint64_t seed);

/// Fold rows first, ordered by (model, lambda, beta, radius, fold), followed
/// by one "mean" row per grid cell. Independent of opts.jobs.
std::vector<CvRow> cross_validate(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                                  const CvOptions& opts);

void write_cv_csv(std::ostream& out, const std::vector<CvRow>& rows);

}  // namespace medn
