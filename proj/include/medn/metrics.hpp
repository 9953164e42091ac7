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

#include <span>
#include <vector>

#include "medn/models.hpp"

namespace medn {

/// Error rates of one evaluation, or the mean over several with their
/// sample standard deviations (n - 1 denominator; 0 for a single run).
struct MetricsReport {
  double per_label_err = 0.0;  // wrongly labeled positions / all positions
  double seq_err = 0.0;        // sequences with any wrong label / all sequences
  double per_label_sd = 0.0;
  double seq_sd = 0.0;
  std::size_t runs = 1;
};

MetricsReport evaluate(const TrainedModel& model, std::span<const SequenceInstance> data);

/// Rates of predictions against gold labels, both given per instance.
MetricsReport score_predictions(std::span<const LabelSeq> predicted,
                                std::span<const SequenceInstance> data);

MetricsReport aggregate(std::span<const MetricsReport> runs);

}  // namespace medn
