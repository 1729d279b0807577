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

#include "paczero/mechanism.h"

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "paczero/binary_channel.h"
#include "paczero/errors.h"

namespace paczero {
namespace {

constexpr std::array<std::pair<Branch, std::string_view>, 4> kBranchNames = {{
    {Branch::kUnanimity, "unanimity"},
    {Branch::kDisagreement, "disagreement"},
    {Branch::kZplCoin, "zpl_coin"},
    {Branch::kSurrogate, "surrogate"},
}};

constexpr std::array<std::pair<Variant, std::string_view>, 3> kVariantNames = {{
    {Variant::kPacZeroMi, "paczero_mi"},
    {Variant::kPacZeroZpl, "paczero_zpl"},
    {Variant::kSurrogate, "surrogate"},
}};

constexpr std::array<std::pair<SurrogateMode, std::string_view>, 5>
    kSurrogateNames = {{
        {SurrogateMode::kRawFull, "raw_full"},
        {SurrogateMode::kQuantFull, "quant_full"},
        {SurrogateMode::kRawHalf, "raw_half"},
        {SurrogateMode::kQuantHalf, "quant_half"},
        {SurrogateMode::kRandomSign, "random_sign"},
    }};

template <typename Enum, std::size_t N>
std::string_view NameOf(const std::array<std::pair<Enum, std::string_view>, N>&
                            table,
                        Enum value) {
  for (const auto& [key, name] : table) {
    if (key == value) return name;
  }
  return "unknown";
}

template <typename Enum, std::size_t N>
Enum ValueOf(const std::array<std::pair<Enum, std::string_view>, N>& table,
             std::string_view name, std::string_view what) {
  for (const auto& [key, entry] : table) {
    if (entry == name) return key;
  }
  throw SchemaError("unknown " + std::string(what) + " '" + std::string(name) +
                    "'");
}

int SignOf(double value) { return value >= 0.0 ? 1 : -1; }

int FairCoin(Engine& rng) {
  std::bernoulli_distribution coin(0.5);
  return coin(rng) ? 1 : -1;
}

double ClippedMean(std::span<const double> scalars,
                   std::span<const std::size_t> members, double clip) {
  double sum = 0.0;
  for (std::size_t i : members) sum += ClipScalar(scalars[i], clip);
  return sum / static_cast<double>(members.size());
}

// Sign released on a unanimity step: a function of q+ alone, so identical
// for every candidate in the posterior support.
int AgreedSign(double q_plus) { return q_plus >= 0.5 ? 1 : -1; }

}  // namespace

std::string_view ToString(Branch branch) { return NameOf(kBranchNames, branch); }
std::string_view ToString(Variant variant) {
  return NameOf(kVariantNames, variant);
}
std::string_view ToString(SurrogateMode mode) {
  return NameOf(kSurrogateNames, mode);
}
Branch ParseBranch(std::string_view name) {
  return ValueOf(kBranchNames, name, "branch");
}
Variant ParseVariant(std::string_view name) {
  return ValueOf(kVariantNames, name, "variant");
}
SurrogateMode ParseSurrogateMode(std::string_view name) {
  return ValueOf(kSurrogateNames, name, "surrogate mode");
}

std::size_t MechanismSpec::ResolvedSubsets() const {
  if (num_subsets != 0) return num_subsets;
  return variant == Variant::kPacZeroZpl ? 126 : 128;
}

void MechanismSpec::Validate() const {
  if (variant == Variant::kPacZeroMi && !(mi_total >= 0.0)) {
    throw DomainError("paczero_mi needs mi_total >= 0");
  }
  const std::size_t m = ResolvedSubsets();
  if (m < 2 || m % 2 != 0) throw DomainError("num_subsets must be even, >= 2");
  if (!(clip > 0.0)) throw DomainError("clip must be > 0");
  if (!(unanimity_tolerance >= 0.0 && unanimity_tolerance < 0.5)) {
    throw DomainError("unanimity tolerance must lie in [0, 0.5)");
  }
  if (k < 1) throw DomainError("k must be >= 1");
}

BudgetLedger::BudgetLedger(double mi_total) : mi_total_(mi_total) {
  if (!(mi_total >= 0.0)) throw DomainError("mi_total must be >= 0");
}

void BudgetLedger::Record(const BudgetEntry& entry) {
  if (entry.beta_used != 0.0 && entry.beta_used != entry.beta) {
    throw DomainError("beta_used must be 0 or the allocated beta");
  }
  if (mi_used_ + entry.beta_used > mi_total_) {
    throw DomainError("step would overrun the MI budget");
  }
  mi_used_ += entry.beta_used;
  entries_.push_back(entry);
}

std::vector<int> SubsetSigns(std::span<const double> scalars,
                             const SubsetDesign& design, double clip) {
  if (scalars.size() != design.num_records()) {
    throw DomainError("need one scalar per record");
  }
  std::vector<int> signs(design.num_subsets());
  for (std::size_t m = 0; m < signs.size(); ++m) {
    signs[m] = SignOf(ClippedMean(scalars, design.members(m), clip));
  }
  return signs;
}

std::string EncodeSigns(std::span<const int> signs) {
  std::string encoded(signs.size(), '+');
  for (std::size_t m = 0; m < signs.size(); ++m) {
    if (signs[m] < 0) encoded[m] = '-';
  }
  return encoded;
}

std::vector<int> DecodeSigns(std::string_view encoded) {
  std::vector<int> signs(encoded.size());
  for (std::size_t m = 0; m < encoded.size(); ++m) {
    if (encoded[m] == '+') {
      signs[m] = 1;
    } else if (encoded[m] == '-') {
      signs[m] = -1;
    } else {
      throw SchemaError("sign string may contain only '+' and '-'");
    }
  }
  return signs;
}

double AgreementProbability(const Posterior& posterior,
                            std::span<const int> signs) {
  if (signs.size() != posterior.size()) {
    throw DomainError("need one sign per candidate");
  }
  double q = 0.0;
  for (std::size_t m = 0; m < signs.size(); ++m) {
    if (signs[m] > 0) q += posterior[m];
  }
  return std::min(q, 1.0);
}

bool IsUnanimous(double q_plus, double tolerance) {
  return q_plus <= tolerance || q_plus >= 1.0 - tolerance;
}

double RemainingShare(double mi_total, double mi_used, int step,
                      int total_steps) {
  if (step < 1 || step > total_steps) {
    throw DomainError("step must lie in [1, T]");
  }
  const double remaining = std::max(0.0, mi_total - mi_used);
  return remaining / static_cast<double>(total_steps - step + 1);
}

double ClampToRemaining(double mi_total, double mi_used, double beta) {
  while (beta > 0.0 && mi_used + beta > mi_total) {
    beta = std::nextafter(beta, 0.0);
  }
  return beta;
}

double CappedBudget(double mi_total, double mi_used, double share,
                    double q_plus) {
  const double capped =
      std::min(share, kEntropyCapFactor * BinaryEntropy(q_plus));
  return ClampToRemaining(mi_total, mi_used, capped);
}

double AdaptiveBudget(const BudgetLedger& ledger, int step, int total_steps,
                      double q_plus) {
  const double share =
      RemainingShare(ledger.mi_total(), ledger.mi_used(), step, total_steps);
  return CappedBudget(ledger.mi_total(), ledger.mi_used(), share, q_plus);
}

StepOutcome MiStep(Posterior& posterior, std::span<const int> signs,
                   std::size_t j_star, double beta, double tolerance,
                   Engine& rng) {
  StepOutcome outcome;
  outcome.q_plus = AgreementProbability(posterior, signs);
  if (IsUnanimous(outcome.q_plus, tolerance)) {
    outcome.branch = Branch::kUnanimity;
    outcome.released_bit = AgreedSign(outcome.q_plus);
    return outcome;
  }
  if (beta < kMinCalibratableBudget) {
    outcome.branch = Branch::kZplCoin;
    outcome.released_bit = FairCoin(rng);
    return outcome;
  }
  const double sigma = InvertChannelMi(outcome.q_plus, beta);
  std::normal_distribution<double> normal;
  const double noisy = signs[j_star] + sigma * normal(rng);

  std::vector<double> log_likelihood(signs.size());
  for (std::size_t m = 0; m < signs.size(); ++m) {
    const double residual = noisy - signs[m];
    log_likelihood[m] = -residual * residual / (2.0 * sigma * sigma);
  }
  posterior.Update(log_likelihood);

  outcome.branch = Branch::kDisagreement;
  outcome.released_bit = SignOf(noisy);
  outcome.sigma = sigma;
  outcome.pre_quant_release = noisy;
  outcome.beta_used = beta;
  return outcome;
}

StepOutcome ZplStep(const Posterior& posterior, std::span<const int> signs,
                    std::size_t /*j_star*/, double tolerance, Engine& rng) {
  StepOutcome outcome;
  outcome.q_plus = AgreementProbability(posterior, signs);
  if (IsUnanimous(outcome.q_plus, tolerance)) {
    outcome.branch = Branch::kUnanimity;
    outcome.released_bit = AgreedSign(outcome.q_plus);
    return outcome;
  }
  outcome.branch = Branch::kZplCoin;
  outcome.released_bit = FairCoin(rng);
  return outcome;
}

double SurrogateRelease(SurrogateMode mode, std::span<const double> scalars,
                        const SubsetDesign& design, std::size_t j_star,
                        double clip, Engine& rng) {
  switch (mode) {
    case SurrogateMode::kRawFull:
    case SurrogateMode::kQuantFull: {
      double sum = 0.0;
      for (double g : scalars) sum += ClipScalar(g, clip);
      const double mean = sum / static_cast<double>(scalars.size());
      return mode == SurrogateMode::kRawFull ? mean : SignOf(mean);
    }
    case SurrogateMode::kRawHalf:
    case SurrogateMode::kQuantHalf: {
      const double mean = ClippedMean(scalars, design.members(j_star), clip);
      return mode == SurrogateMode::kRawHalf ? mean : SignOf(mean);
    }
    case SurrogateMode::kRandomSign:
      return FairCoin(rng);
  }
  throw DomainError("unknown surrogate mode");
}

Mechanism::Mechanism(MechanismSpec spec, const SubsetDesign& design,
                     std::size_t j_star, std::uint64_t seed, int total_steps)
    : spec_(std::move(spec)),
      design_(design),
      j_star_(j_star),
      total_steps_(total_steps),
      rng_(MakeEngine(seed, Stream::kMechanism)),
      posterior_(Posterior::Uniform(design.num_subsets())),
      ledger_(spec_.variant == Variant::kPacZeroMi ? spec_.mi_total : 0.0) {
  spec_.Validate();
  if (design.num_subsets() != spec_.ResolvedSubsets()) {
    throw DomainError("design and spec disagree on the number of subsets");
  }
  if (j_star >= design.num_subsets()) throw DomainError("secret out of range");
  if (total_steps < 1) throw DomainError("total steps must be >= 1");
}

StepRecord Mechanism::Release(int step, std::span<const double> scalars) {
  const double share = RemainingShare(ledger_.mi_total(), ledger_.mi_used(),
                                      step, total_steps_);
  return ReleaseOne(step, 0, scalars, share);
}

std::vector<StepRecord> Mechanism::ReleaseAggregate(
    int step, std::span<const std::vector<double>> per_direction_scalars) {
  if (per_direction_scalars.empty()) {
    throw DomainError("aggregate release needs >= 1 direction");
  }
  const double share = RemainingShare(ledger_.mi_total(), ledger_.mi_used(),
                                      step, total_steps_);
  const double per_bit =
      share / static_cast<double>(per_direction_scalars.size());
  std::vector<StepRecord> records;
  records.reserve(per_direction_scalars.size());
  for (std::size_t k = 0; k < per_direction_scalars.size(); ++k) {
    records.push_back(ReleaseOne(step, static_cast<int>(k),
                                 per_direction_scalars[k], per_bit));
  }
  return records;
}

StepRecord Mechanism::ReleaseOne(int step, int direction,
                                 std::span<const double> scalars,
                                 double share) {
  if (spec_.variant == Variant::kSurrogate) {
    StepRecord record;
    record.step = step;
    record.direction = direction;
    record.branch = Branch::kSurrogate;
    record.release = SurrogateRelease(spec_.surrogate, scalars, design_,
                                      j_star_, spec_.clip, rng_);
    record.released_bit = SignOf(record.release);
    return record;
  }

  const std::vector<int> signs = SubsetSigns(scalars, design_, spec_.clip);
  StepOutcome outcome;
  double beta = 0.0;
  if (spec_.variant == Variant::kPacZeroMi) {
    const double q_plus = AgreementProbability(posterior_, signs);
    beta = CappedBudget(ledger_.mi_total(), ledger_.mi_used(), share, q_plus);
    outcome = MiStep(posterior_, signs, j_star_, beta,
                     spec_.unanimity_tolerance, rng_);
  } else {
    outcome = ZplStep(posterior_, signs, j_star_, spec_.unanimity_tolerance,
                      rng_);
  }
  ledger_.Record({beta, outcome.beta_used, outcome.branch, outcome.sigma});
  return Finish(step, direction, outcome, beta, signs);
}

StepRecord Mechanism::Finish(int step, int direction,
                             const StepOutcome& outcome, double beta,
                             std::span<const int> signs) {
  if (outcome.branch == Branch::kUnanimity) ++unanimity_count_;
  StepRecord record;
  record.step = step;
  record.direction = direction;
  record.branch = outcome.branch;
  record.q_plus = outcome.q_plus;
  record.beta = beta;
  record.sigma = outcome.sigma;
  record.released_bit = outcome.released_bit;
  record.release = outcome.released_bit;
  record.pre_quant_release = outcome.pre_quant_release;
  record.beta_used = outcome.beta_used;
  record.cumulative_mi = ledger_.mi_used();
  record.unanimity_count = unanimity_count_;
  record.signs = EncodeSigns(signs);
  return record;
}

}  // namespace paczero
