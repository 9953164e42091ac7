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

// One training interface over the three model families.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "medn/medn.hpp"

namespace medn {

enum class ModelKind { M3N, LapMEDN, L1M3N };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct TrainOptions {
  ModelKind kind = ModelKind::M3N;
  double beta = 1.0;
  std::optional<double> C;  // defaults to 200 * beta
  int iterations = 100;
  double lambda = 36.0;     // LapMEDN
  double lap_C = 1.0;       // LapMEDN multiplier on C
  int outer_iters = 3;      // LapMEDN
  double radius = 10.0;     // L1-M3N
  std::uint64_t seed = 0;

  SubgradConfig subgrad() const;
};

struct TrainedModel {
  ModelKind kind = ModelKind::M3N;
  TrainOptions options;
  FeatureSpec spec;
  Vector weights;                  // posterior mean for the MaxEnDNet families
  std::optional<Vector> variance;  // absent for L1-M3N
  std::size_t n_train = 0;

  ChainModel chain() const { return ChainModel(spec, weights); }
  LabelSeq predict(const Matrix& x) const;
};

TrainedModel train_model(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                         const TrainOptions& options);

/// The objective each family's solver works on, evaluated at the returned
/// weights (quadratic with the final inner regularizer, or C * hinge for L1).
double training_objective(const TrainedModel& model, std::span<const SequenceInstance> data);

}  // namespace medn
