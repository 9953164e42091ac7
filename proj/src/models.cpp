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

#include "medn/models.hpp"

#include <stdexcept>
#include <string>

namespace medn {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::M3N: return "m3n";
    case ModelKind::LapMEDN: return "lapmedn";
    case ModelKind::L1M3N: return "l1m3n";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "m3n") return ModelKind::M3N;
  if (name == "lapmedn") return ModelKind::LapMEDN;
  if (name == "l1m3n") return ModelKind::L1M3N;
  throw std::invalid_argument("unknown model '" + std::string(name) +
                              "' (expected m3n, lapmedn or l1m3n)");
}

SubgradConfig TrainOptions::subgrad() const {
  SubgradConfig cfg = SubgradConfig::from_beta(beta, iterations, seed);
  if (C) cfg.C = *C;
  return cfg;
}

LabelSeq TrainedModel::predict(const Matrix& x) const {
  if (variance) return predict_mean(Posterior{spec, weights, *variance, {}}, x);
  return decode(chain(), x);
}

TrainedModel train_model(std::span<const SequenceInstance> data, const FeatureSpec& spec,
                         const TrainOptions& options) {
  TrainedModel out;
  out.kind = options.kind;
  out.options = options;
  out.spec = spec;
  out.n_train = data.size();
  switch (options.kind) {
    case ModelKind::M3N: {
      Posterior post = train_gaussian(data, spec, options.subgrad());
      out.weights = std::move(post.mean);
      out.variance = std::move(post.var_diag);
      break;
    }
    case ModelKind::LapMEDN: {
      LaplaceConfig cfg{options.lambda, options.lap_C, options.outer_iters, options.subgrad()};
      Posterior post = train_laplace(data, spec, cfg);
      out.weights = std::move(post.mean);
      out.variance = std::move(post.var_diag);
      break;
    }
    case ModelKind::L1M3N:
      out.weights = train_l1m3n(data, spec, options.radius, options.subgrad()).weights;
      break;
  }
  return out;
}

double training_objective(const TrainedModel& model, std::span<const SequenceInstance> data) {
  const ChainModel chain = model.chain();
  const SubgradConfig cfg = model.options.subgrad();
  switch (model.kind) {
    case ModelKind::M3N:
      return quad_objective(data, chain, QuadRegularizer::identity(chain.weights.size()), cfg.C);
    case ModelKind::LapMEDN: {
      // The last inner solve used the variances from the previous round; the
      // returned ones are one update further, so report against those.
      QuadRegularizer reg{Vector(chain.weights.size())};
      for (std::size_t k = 0; k < reg.inv_diag.size(); ++k)
        reg.inv_diag[k] = 1.0 / (*model.variance)[k];
      return quad_objective(data, chain, reg, model.options.lap_C * cfg.C);
    }
    case ModelKind::L1M3N: {
      double hinge = 0.0;
      for (const auto& inst : data) hinge += structured_hinge(chain, inst);
      return cfg.C * hinge;
    }
  }
  return 0.0;
}

}  // namespace medn
