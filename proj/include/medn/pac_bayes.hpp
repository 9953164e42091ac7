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

// Explicit PAC-Bayes margin bound for the averaging predictor:
//
//   Pr_Q(M <= 0) <= Pr_D(M <= gamma) + |Y| exp(-m gamma^2 / (32 c^2))
//                   + sqrt((m KL + ln N + 3 ln((m + 1)/delta) + 2) / (2N - 1))
//
// with m = ceil(16 c^2 gamma^-2 ln(N |Y|^2 / (KL + 1))).

#include <cstdint>

namespace medn {

struct BoundInputs {
  double N = 1;       // sample count, >= 1
  double y_card = 2;  // |Y|, >= 1; a double since m^L overflows integers
  double c = 1;       // |F| <= c
  double gamma = 1;   // margin threshold
  double kl = 0;      // KL(p || p0)
  double delta = 0.05;
  double empirical_margin_rate = 0;  // Pr_D(M <= gamma)

  void validate() const;
};

struct PacBound {
  std::uint64_t m = 0;
  double empirical = 0.0;
  double sampling_term = 0.0;    // |Y| exp(-m gamma^2 / (32 c^2))
  double complexity_term = 0.0;  // the square-root term
  double value = 0.0;            // not clipped to 1
};

/// Number of sampled models m; at least 1.
std::uint64_t pac_sample_size(const BoundInputs& in);

/// The bound at a caller-chosen m.
PacBound pac_bound_at(const BoundInputs& in, std::uint64_t m);

PacBound pac_bound(const BoundInputs& in);

}  // namespace medn
