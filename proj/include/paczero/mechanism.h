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

#ifndef PACZERO_MECHANISM_H_
#define PACZERO_MECHANISM_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paczero/posterior.h"
#include "paczero/random.h"
#include "paczero/subset_design.h"
#include "paczero/zo_engine.h"

namespace paczero {

enum class Branch { kUnanimity, kDisagreement, kZplCoin, kSurrogate };
enum class Variant { kPacZeroMi, kPacZeroZpl, kSurrogate };
enum class SurrogateMode {
  kRawFull,
  kQuantFull,
  kRawHalf,
  kQuantHalf,
  kRandomSign
};

std::string_view ToString(Branch branch);
std::string_view ToString(Variant variant);
std::string_view ToString(SurrogateMode mode);
// Throw SchemaError on unknown names.
Branch ParseBranch(std::string_view name);
Variant ParseVariant(std::string_view name);
SurrogateMode ParseSurrogateMode(std::string_view name);

inline constexpr double kDefaultUnanimityTolerance = 1e-12;
// Fraction of h(q+) a single release may be calibrated to.
inline constexpr double kEntropyCapFactor = 0.999;
// Budgets below this are treated as exhausted; no sigma on [1e-12, 1e12]
// realizes them.
inline constexpr double kMinCalibratableBudget = 1e-20;

struct MechanismSpec {
  Variant variant = Variant::kPacZeroMi;
  double mi_total = 0.33;       // nats; paczero_mi only
  std::size_t num_subsets = 0;  // 0 selects the variant default
  double clip = kNoClip;
  double unanimity_tolerance = kDefaultUnanimityTolerance;
  SurrogateMode surrogate = SurrogateMode::kRandomSign;
  int k = 1;  // directions aggregated per step

  std::size_t ResolvedSubsets() const;
  bool IsPrivate() const { return variant != Variant::kSurrogate; }
  void Validate() const;
};

// Per-release public record. For K-aggregated runs there are K records per
// step, distinguished by `direction`.
struct StepRecord {
  int step = 0;
  int direction = 0;
  Branch branch = Branch::kUnanimity;
  double q_plus = 0.0;
  double beta = 0.0;  // allocated budget
  std::optional<double> sigma;
  int released_bit = 1;
  double release = 1.0;  // value multiplying z in the update
  std::optional<double> pre_quant_release;
  double beta_used = 0.0;
  double cumulative_mi = 0.0;
  int unanimity_count = 0;
  std::string signs;  // '+'/'-' per subset; empty for surrogates
};

struct BudgetEntry {
  double beta = 0.0;
  double beta_used = 0.0;
  Branch branch = Branch::kUnanimity;
  std::optional<double> sigma;
};

// Total MI budget and its consumption. Record() rejects entries violating
// the {0, beta} dichotomy or overrunning the total.
class BudgetLedger {
 public:
  explicit BudgetLedger(double mi_total);

  double mi_total() const { return mi_total_; }
  double mi_used() const { return mi_used_; }
  std::span<const BudgetEntry> entries() const { return entries_; }

  void Record(const BudgetEntry& entry);

 private:
  double mi_total_;
  double mi_used_ = 0.0;
  std::vector<BudgetEntry> entries_;
};

// Clips each scalar to [-c, c], averages each subset in ascending record
// order and returns the signs with sign(0) = +1.
std::vector<int> SubsetSigns(std::span<const double> scalars,
                             const SubsetDesign& design, double clip);

std::string EncodeSigns(std::span<const int> signs);
std::vector<int> DecodeSigns(std::string_view encoded);

// q+ = sum_m p[m] 1[s_m = +1].
double AgreementProbability(const Posterior& posterior,
                            std::span<const int> signs);

bool IsUnanimous(double q_plus, double tolerance);

// max(0, total - used) / (T - t + 1).
double RemainingShare(double mi_total, double mi_used, int step,
                      int total_steps);

// Largest value <= beta with used + value <= total in floating point.
double ClampToRemaining(double mi_total, double mi_used, double beta);

// Per-bit budget: min(share, 0.999 h(q+)), clamped to the remaining total.
double CappedBudget(double mi_total, double mi_used, double share,
                    double q_plus);

// RemainingShare capped at 0.999 h(q+) and clamped to the remaining total.
double AdaptiveBudget(const BudgetLedger& ledger, int step, int total_steps,
                      double q_plus);

struct StepOutcome {
  Branch branch = Branch::kUnanimity;
  int released_bit = 1;
  double q_plus = 0.0;
  std::optional<double> sigma;
  std::optional<double> pre_quant_release;
  double beta_used = 0.0;
};

// One PACZero-MI release. Unanimity releases s_{j*} for free. Disagreement
// calibrates sigma to beta, releases sign(s_{j*} + N(0, sigma^2)) and
// updates the posterior on the real-valued release. A disagreement with
// beta below kMinCalibratableBudget releases a fair coin instead.
StepOutcome MiStep(Posterior& posterior, std::span<const int> signs,
                   std::size_t j_star, double beta, double tolerance,
                   Engine& rng);

// PACZero-ZPL: unanimity as in MiStep, otherwise a fair coin that ignores
// j_star. The posterior never changes.
StepOutcome ZplStep(const Posterior& posterior, std::span<const int> signs,
                    std::size_t j_star, double tolerance, Engine& rng);

// Non-private release replacing the full mechanism.
double SurrogateRelease(SurrogateMode mode, std::span<const double> scalars,
                        const SubsetDesign& design, std::size_t j_star,
                        double clip, Engine& rng);

// Per-run mechanism state: posterior, ledger and noise stream. Not shareable
// across runs.
class Mechanism {
 public:
  Mechanism(MechanismSpec spec, const SubsetDesign& design, std::size_t j_star,
            std::uint64_t seed, int total_steps);

  // The single-direction release at 1-based step t.
  StepRecord Release(int step, std::span<const double> scalars);

  // K releases at step t, one per direction, threading one posterior in
  // direction order. Each bit gets RemainingShare / K, capped by its own
  // entropy ceiling.
  std::vector<StepRecord> ReleaseAggregate(
      int step, std::span<const std::vector<double>> per_direction_scalars);

  const MechanismSpec& spec() const { return spec_; }
  const Posterior& posterior() const { return posterior_; }
  const BudgetLedger& ledger() const { return ledger_; }

 private:
  StepRecord ReleaseOne(int step, int direction,
                        std::span<const double> scalars, double share);
  StepRecord Finish(int step, int direction, const StepOutcome& outcome,
                    double beta, std::span<const int> signs);

  MechanismSpec spec_;
  const SubsetDesign& design_;
  std::size_t j_star_;
  int total_steps_;
  Engine rng_;
  Posterior posterior_;
  BudgetLedger ledger_;
  int unanimity_count_ = 0;
};

}  // namespace paczero

#endif  // PACZERO_MECHANISM_H_
