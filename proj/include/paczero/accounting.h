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

#ifndef PACZERO_ACCOUNTING_H_
#define PACZERO_ACCOUNTING_H_

#include <optional>
#include <string>

#include "json.hpp"
#include "paczero/transcript.h"

namespace paczero {

// Binary KL divergence p ln(p/q) + (1-p) ln((1-p)/(1-q)), 0 ln 0 = 0.
// Returns +infinity when q is 0 or 1 and p differs from q.
double KlBinary(double p, double q);

struct MiaBound {
  double prior = 0.5;
  double mi_budget = 0.0;
  double posterior_bound = 0.5;
};

// Largest attack success p in [prior, 1) with KL(p || prior) <= mi, by
// bisection to 1e-12. Returns 1 once mi exceeds KL(1 - 1e-15 || prior).
double MiaPosteriorBound(double mi, double prior);
MiaBound MakeMiaBound(double mi, double prior);

// MIA success bound of (eps, delta)-DP: e^eps / (1 + e^eps) + delta, <= 1.
double DpEpsToMiaBound(double eps, double delta);

// MI budget whose posterior bound equals the DP bound. +infinity when the
// DP bound reaches 1.
double MatchedMiForDp(double eps, double delta, double prior);

// The eps whose DP bound equals the posterior bound at this MI and prior
// 1/2. A reference annotation only. +infinity when the bound is 1.
double MatchedDpEpsilon(double mi, double delta);

struct ValidationReport {
  bool ok = true;
  bool is_private = true;
  std::optional<int> failed_step;
  std::optional<int> failed_direction;
  std::string failure;
  int records_checked = 0;
  double cumulative_mi = 0.0;
  double mi_total = 0.0;
  int unanimity_count = 0;
  int disagreement_count = 0;
  int coin_count = 0;
  // Upper bound on leakage of tolerance-detected unanimity steps (sum of
  // h(q+) over those with q+ not exactly 0 or 1). Informational; never
  // added to cumulative_mi.
  double tolerance_residual_mi = 0.0;

  std::string ToText() const;
  nlohmann::json ToJson() const;
};

// Re-derives, from the transcript alone, the posterior (from the recorded
// signs and noisy releases), every q+, branch decision and allocated beta,
// checks the {0, beta} dichotomy, the calibration MI(q+, sigma) = beta, the
// cumulative MI and its cap, and that ZPL spends nothing. Stops at the first
// violation.
ValidationReport ValidateTranscript(const Transcript& transcript);

}  // namespace paczero

#endif  // PACZERO_ACCOUNTING_H_
