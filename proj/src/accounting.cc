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

#include "paczero/accounting.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "paczero/binary_channel.h"
#include "paczero/errors.h"
#include "paczero/posterior.h"

namespace paczero {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kBoundCeiling = 1.0 - 1e-15;
constexpr double kBoundTolerance = 1e-12;
// Tolerances for quantities recomputed from the transcript.
constexpr double kQPlusTolerance = 1e-12;
constexpr double kCalibrationTolerance = 1e-9;

bool IsProbability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

double KlBinary(double p, double q) {
  if (!IsProbability(p) || !IsProbability(q)) {
    throw DomainError("binary KL needs p, q in [0, 1]");
  }
  if (q == 0.0 || q == 1.0) return p == q ? 0.0 : kInfinity;
  double kl = 0.0;
  if (p > 0.0) kl += p * std::log(p / q);
  if (p < 1.0) kl += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return std::max(kl, 0.0);
}

double MiaPosteriorBound(double mi, double prior) {
  if (!(mi >= 0.0)) throw DomainError("MI must be nonnegative");
  if (!(prior > 0.0 && prior < 1.0)) {
    throw DomainError("prior must lie in (0, 1)");
  }
  if (mi == 0.0) return prior;
  if (prior >= kBoundCeiling || mi > KlBinary(kBoundCeiling, prior)) return 1.0;
  double lo = prior;
  double hi = kBoundCeiling;
  while (hi - lo > kBoundTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (KlBinary(mid, prior) <= mi) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MiaBound MakeMiaBound(double mi, double prior) {
  return {prior, mi, MiaPosteriorBound(mi, prior)};
}

double DpEpsToMiaBound(double eps, double delta) {
  if (!(eps >= 0.0)) throw DomainError("eps must be nonnegative");
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw DomainError("delta must lie in [0, 1)");
  }
  return std::min(1.0, 1.0 / (1.0 + std::exp(-eps)) + delta);
}

double MatchedMiForDp(double eps, double delta, double prior) {
  const double bound = DpEpsToMiaBound(eps, delta);
  if (bound >= 1.0) return kInfinity;
  if (bound <= prior) return 0.0;
  return KlBinary(bound, prior);
}

double MatchedDpEpsilon(double mi, double delta) {
  const double bound = MiaPosteriorBound(mi, 0.5) - delta;
  if (bound <= 0.5) return 0.0;
  if (bound >= 1.0) return kInfinity;
  return std::log(bound / (1.0 - bound));
}

std::string ValidationReport::ToText() const {
  std::ostringstream out;
  out << (ok ? "PASS" : "FAIL") << '\n';
  if (!ok) {
    out << "first violation: step " << failed_step.value_or(0) << " direction "
        << failed_direction.value_or(0) << ": " << failure << '\n';
  }
  out << "private: " << (is_private ? "yes" : "no (accounting disabled)")
      << '\n';
  out << "records checked: " << records_checked << '\n';
  out << "cumulative MI: " << cumulative_mi << " nats (budget " << mi_total
      << ")\n";
  out << "unanimity / disagreement / coin: " << unanimity_count << " / "
      << disagreement_count << " / " << coin_count << '\n';
  out << "tolerance residual (informational, not added): "
      << tolerance_residual_mi << " nats\n";
  return out.str();
}

nlohmann::json ValidationReport::ToJson() const {
  nlohmann::json object;
  object["ok"] = ok;
  object["private"] = is_private;
  object["failed_step"] =
      failed_step ? nlohmann::json(*failed_step) : nlohmann::json(nullptr);
  object["failed_direction"] = failed_direction
                                   ? nlohmann::json(*failed_direction)
                                   : nlohmann::json(nullptr);
  object["failure"] = failure;
  object["records_checked"] = records_checked;
  object["cumulative_mi"] = cumulative_mi;
  object["mi_total"] = mi_total;
  object["unanimity_count"] = unanimity_count;
  object["disagreement_count"] = disagreement_count;
  object["coin_count"] = coin_count;
  object["tolerance_residual_mi"] = tolerance_residual_mi;
  return object;
}

ValidationReport ValidateTranscript(const Transcript& transcript) {
  const TranscriptHeader& header = transcript.header;
  ValidationReport report;
  report.is_private = header.IsPrivate();
  report.mi_total = header.mi_total;

  auto fail = [&report](const StepRecord* record, std::string message) {
    report.ok = false;
    if (record != nullptr) {
      report.failed_step = record->step;
      report.failed_direction = record->direction;
    }
    report.failure = std::move(message);
    return report;
  };

  if (header.steps < 1 || header.k < 1) {
    return fail(nullptr, "header needs steps >= 1 and k >= 1");
  }
  const std::size_t expected =
      static_cast<std::size_t>(header.steps) * static_cast<std::size_t>(header.k);
  if (transcript.records.size() != expected) {
    return fail(nullptr, "expected " + std::to_string(expected) +
                             " records, found " +
                             std::to_string(transcript.records.size()));
  }
  for (std::size_t r = 0; r < transcript.records.size(); ++r) {
    const StepRecord& record = transcript.records[r];
    if (record.step != static_cast<int>(r) / header.k + 1 ||
        record.direction != static_cast<int>(r) % header.k) {
      return fail(&record, "records out of (step, direction) order");
    }
  }

  if (!header.IsPrivate()) {
    for (const StepRecord& record : transcript.records) {
      ++report.records_checked;
      if (record.branch != Branch::kSurrogate) {
        return fail(&record, "surrogate run contains a private branch");
      }
      if (record.beta_used != 0.0 || record.cumulative_mi != 0.0) {
        return fail(&record, "surrogate run must not consume budget");
      }
    }
    return report;
  }

  const bool is_mi = header.variant == Variant::kPacZeroMi;
  const double total = is_mi ? header.mi_total : 0.0;
  if (!(total >= 0.0)) return fail(nullptr, "mi_total must be nonnegative");
  Posterior posterior = Posterior::Uniform(header.num_subsets);
  double used = 0.0;
  double previous_cumulative = 0.0;
  int unanimity = 0;

  for (int t = 1; t <= header.steps; ++t) {
    const double share =
        is_mi ? RemainingShare(total, used, t, header.steps) / header.k : 0.0;
    for (int k = 0; k < header.k; ++k) {
      const StepRecord& record =
          transcript.records[static_cast<std::size_t>(t - 1) * header.k + k];
      ++report.records_checked;

      if (record.signs.size() != header.num_subsets) {
        return fail(&record, "sign string length differs from M");
      }
      std::vector<int> signs;
      try {
        signs = DecodeSigns(record.signs);
      } catch (const SchemaError& e) {
        return fail(&record, e.what());
      }
      const double q_plus = AgreementProbability(posterior, signs);
      if (std::abs(q_plus - record.q_plus) > kQPlusTolerance) {
        return fail(&record, "recorded q+ " + std::to_string(record.q_plus) +
                                 " differs from re-derived " +
                                 std::to_string(q_plus));
      }
      const bool unanimous = IsUnanimous(q_plus, header.unanimity_tolerance);
      const double beta =
          is_mi ? CappedBudget(total, used, share, q_plus) : 0.0;

      Branch expected_branch = Branch::kZplCoin;
      if (unanimous) {
        expected_branch = Branch::kUnanimity;
      } else if (is_mi && beta >= kMinCalibratableBudget) {
        expected_branch = Branch::kDisagreement;
      }
      if (record.branch != expected_branch) {
        return fail(&record, "branch '" + std::string(ToString(record.branch)) +
                                 "' but re-derived '" +
                                 std::string(ToString(expected_branch)) + "'");
      }
      if (is_mi && std::abs(record.beta - beta) > 1e-15 + 1e-12 * beta) {
        return fail(&record, "allocated beta " + std::to_string(record.beta) +
                                 " differs from re-derived " +
                                 std::to_string(beta));
      }
      if (record.beta_used != 0.0 && record.beta_used != record.beta) {
        return fail(&record, "beta_used is neither 0 nor beta");
      }
      if (record.beta_used > beta * (1.0 + 1e-12)) {
        return fail(&record, "beta_used exceeds the re-derived beta");
      }

      switch (record.branch) {
        case Branch::kUnanimity: {
          ++unanimity;
          ++report.unanimity_count;
          if (record.beta_used != 0.0 || record.sigma ||
              record.pre_quant_release) {
            return fail(&record, "unanimity step must be noiseless and free");
          }
          if (record.released_bit != (q_plus >= 0.5 ? 1 : -1)) {
            return fail(&record, "unanimity release differs from agreed sign");
          }
          if (q_plus != 0.0 && q_plus != 1.0) {
            report.tolerance_residual_mi += BinaryEntropy(q_plus);
          }
          break;
        }
        case Branch::kZplCoin: {
          ++report.coin_count;
          if (record.beta_used != 0.0 || record.sigma ||
              record.pre_quant_release) {
            return fail(&record, "coin step must be noiseless and free");
          }
          break;
        }
        case Branch::kDisagreement: {
          ++report.disagreement_count;
          if (!record.sigma || !record.pre_quant_release) {
            return fail(&record, "disagreement step lacks sigma or release");
          }
          if (record.beta_used != record.beta) {
            return fail(&record, "disagreement step must spend its beta");
          }
          const double achieved = ChannelMi({q_plus, *record.sigma});
          if (std::abs(achieved - beta) > kCalibrationTolerance) {
            return fail(&record, "sigma realizes MI " +
                                     std::to_string(achieved) +
                                     " instead of beta " + std::to_string(beta));
          }
          const double noisy = *record.pre_quant_release;
          if (record.released_bit != (noisy >= 0.0 ? 1 : -1)) {
            return fail(&record, "released bit is not sign(noisy release)");
          }
          std::vector<double> log_likelihood(signs.size());
          const double sigma = *record.sigma;
          for (std::size_t m = 0; m < signs.size(); ++m) {
            const double residual = noisy - signs[m];
            log_likelihood[m] = -residual * residual / (2.0 * sigma * sigma);
          }
          posterior.Update(log_likelihood);
          break;
        }
        case Branch::kSurrogate:
          return fail(&record, "private run contains a surrogate release");
      }
      if (record.release != record.released_bit) {
        return fail(&record, "private release must be the released bit");
      }

      used += record.beta_used;
      if (used > total) {
        return fail(&record, "cumulative MI " + std::to_string(used) +
                                 " exceeds budget " + std::to_string(total));
      }
      if (record.cumulative_mi < previous_cumulative) {
        return fail(&record, "cumulative MI decreased");
      }
      if (std::abs(record.cumulative_mi - used) > 1e-12) {
        return fail(&record, "recorded cumulative MI differs from the sum");
      }
      if (!is_mi && record.cumulative_mi != 0.0) {
        return fail(&record, "ZPL transcript has nonzero cumulative MI");
      }
      if (record.unanimity_count != unanimity) {
        return fail(&record, "unanimity count is inconsistent");
      }
      previous_cumulative = record.cumulative_mi;
    }
  }
  report.cumulative_mi = used;
  return report;
}

}  // namespace paczero
