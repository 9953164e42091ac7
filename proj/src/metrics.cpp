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

#include "medn/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace medn {

MetricsReport score_predictions(std::span<const LabelSeq> predicted,
                                std::span<const SequenceInstance> data) {
  if (predicted.size() != data.size())
    throw std::invalid_argument("score_predictions: prediction count mismatch");
  if (data.empty()) throw std::invalid_argument("score_predictions: empty evaluation set");
  std::size_t wrong = 0, positions = 0, wrong_seqs = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t h = hamming_loss(predicted[i], data[i].labels);
    wrong += h;
    positions += data[i].length();
    wrong_seqs += h > 0 ? 1 : 0;
  }
  MetricsReport r;
  r.per_label_err = static_cast<double>(wrong) / static_cast<double>(positions);
  r.seq_err = static_cast<double>(wrong_seqs) / static_cast<double>(data.size());
  return r;
}

MetricsReport evaluate(const TrainedModel& model, std::span<const SequenceInstance> data) {
  std::vector<LabelSeq> predicted;
  predicted.reserve(data.size());
  for (const auto& inst : data) {
    inst.validate(model.spec);
    predicted.push_back(model.predict(inst.features));
  }
  return score_predictions(predicted, data);
}

MetricsReport aggregate(std::span<const MetricsReport> runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
  const double n = static_cast<double>(runs.size());
  MetricsReport out;
  out.runs = runs.size();
  out.per_label_err = 0.0;
  out.seq_err = 0.0;
  for (const auto& r : runs) {
    out.per_label_err += r.per_label_err;
    out.seq_err += r.seq_err;
  }
  out.per_label_err /= n;
  out.seq_err /= n;
  if (runs.size() > 1) {
    double a = 0.0, b = 0.0;
    for (const auto& r : runs) {
      a += (r.per_label_err - out.per_label_err) * (r.per_label_err - out.per_label_err);
      b += (r.seq_err - out.seq_err) * (r.seq_err - out.seq_err);
    }
    out.per_label_sd = std::sqrt(a / (n - 1.0));
    out.seq_sd = std::sqrt(b / (n - 1.0));
  }
  return out;
}

}  // namespace medn
