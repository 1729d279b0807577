//
// Copyright 2026 The paczero Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "paczero/posterior.h"

#include <algorithm>
#include <cmath>

#include "paczero/errors.h"

namespace paczero {

Posterior Posterior::Uniform(std::size_t num_candidates) {
  return Posterior(std::vector<double>(num_candidates, 0.0));
}

Posterior::Posterior(std::vector<double> log_weights)
    : log_weights_(std::move(log_weights)) {
  if (log_weights_.empty()) throw DomainError("posterior needs >= 1 candidate");
  Normalize();
}

void Posterior::Update(std::span<const double> log_likelihood) {
  if (log_likelihood.size() != log_weights_.size()) {
    throw DomainError("likelihood length differs from posterior size");
  }
  for (std::size_t m = 0; m < log_weights_.size(); ++m) {
    log_weights_[m] += log_likelihood[m];
  }
  Normalize();
}

void Posterior::Normalize() {
  const double peak = *std::max_element(log_weights_.begin(), log_weights_.end());
  if (!std::isfinite(peak)) throw NumericError("posterior support is empty");
  probabilities_.resize(log_weights_.size());
  double total = 0.0;
  for (std::size_t m = 0; m < log_weights_.size(); ++m) {
    if (std::isnan(log_weights_[m])) throw NumericError("NaN posterior weight");
    probabilities_[m] = std::exp(log_weights_[m] - peak);
    total += probabilities_[m];
  }
  const double log_total = peak + std::log(total);
  for (std::size_t m = 0; m < log_weights_.size(); ++m) {
    log_weights_[m] -= log_total;
    probabilities_[m] /= total;
  }
}

}  // namespace paczero
