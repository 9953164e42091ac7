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

#include "medn/pac_bayes.hpp"

#include <cmath>
#include <stdexcept>

namespace medn {

void BoundInputs::validate() const {
  if (!(N >= 1.0) || !std::isfinite(N)) throw std::domain_error("pac bound: N must be >= 1");
  if (!(y_card >= 1.0) || !std::isfinite(y_card)) throw std::domain_error("pac bound: |Y| must be >= 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw std::domain_error("pac bound: c must be > 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::domain_error("pac bound: gamma must be > 0");
  if (!(kl >= 0.0) || !std::isfinite(kl)) throw std::domain_error("pac bound: KL must be >= 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("pac bound: delta must be in (0, 1)");
  if (!(empirical_margin_rate >= 0.0 && empirical_margin_rate <= 1.0))
    throw std::domain_error("pac bound: empirical margin rate must be in [0, 1]");
}

std::uint64_t pac_sample_size(const BoundInputs& in) {
  in.validate();
  const double log_arg = std::log(in.N) + 2.0 * std::log(in.y_card) - std::log1p(in.kl);
  const double m = std::ceil(16.0 * in.c * in.c / (in.gamma * in.gamma) * log_arg);
  if (!(m >= 1.0)) return 1;
  if (m > 1e18) throw std::domain_error("pac bound: sample size overflows");
  return static_cast<std::uint64_t>(m);
}

PacBound pac_bound_at(const BoundInputs& in, std::uint64_t m) {
  in.validate();
  if (m < 1) throw std::domain_error("pac bound: m must be >= 1");
  const double md = static_cast<double>(m);
  PacBound b;
  b.m = m;
  b.empirical = in.empirical_margin_rate;
  b.sampling_term = in.y_card * std::exp(-md * in.gamma * in.gamma / (32.0 * in.c * in.c));
  const double numer = md * in.kl + std::log(in.N) + 3.0 * std::log((md + 1.0) / in.delta) + 2.0;
  b.complexity_term = std::sqrt(numer / (2.0 * in.N - 1.0));
  b.value = b.empirical + b.sampling_term + b.complexity_term;
  return b;
}

PacBound pac_bound(const BoundInputs& in) { return pac_bound_at(in, pac_sample_size(in)); }

}  // namespace medn
