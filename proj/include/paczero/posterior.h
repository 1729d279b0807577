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

#ifndef PACZERO_POSTERIOR_H_
#define PACZERO_POSTERIOR_H_

#include <cstddef>
#include <span>
#include <vector>

namespace paczero {

// Belief over the secret subset index, kept in log-space. Every update
// renormalizes by max-subtraction, so weights sum to one and no entry is
// hard-zeroed except by underflow of exp().
class Posterior {
 public:
  static Posterior Uniform(std::size_t num_candidates);
  explicit Posterior(std::vector<double> log_weights);

  std::size_t size() const { return log_weights_.size(); }
  std::span<const double> probabilities() const { return probabilities_; }
  std::span<const double> log_weights() const { return log_weights_; }
  double operator[](std::size_t m) const { return probabilities_[m]; }

  // p[m] <- p[m] * exp(log_likelihood[m]), renormalized.
  void Update(std::span<const double> log_likelihood);

 private:
  void Normalize();

  std::vector<double> log_weights_;
  std::vector<double> probabilities_;
};

}  // namespace paczero

#endif  // PACZERO_POSTERIOR_H_
