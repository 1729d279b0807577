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
#include <numbers>

#include <gtest/gtest.h>
#include "oracles.h"
#include "paczero/errors.h"
#include "paczero/tasks.h"
#include "paczero/trainer.h"

namespace paczero {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(KlBinaryTest, Examples) {
  EXPECT_EQ(KlBinary(0.3, 0.3), 0.0);
  EXPECT_NEAR(KlBinary(0.84, 0.5),
              0.84 * std::log(0.84 / 0.5) + 0.16 * std::log(0.16 / 0.5), 1e-15);
  EXPECT_NEAR(KlBinary(0.84, 0.5), 0.2535, 1e-4);
  EXPECT_NEAR(KlBinary(1.0, 0.5), std::numbers::ln2, 1e-15);
  EXPECT_EQ(KlBinary(0.5, 1.0), kInf);
  EXPECT_EQ(KlBinary(0.0, 0.0), 0.0);
  EXPECT_THROW(KlBinary(1.2, 0.5), DomainError);
}

TEST(MiaPosteriorBoundTest, ReferenceValues) {
  EXPECT_EQ(MiaPosteriorBound(0.0, 0.5), 0.5);
  EXPECT_NEAR(MiaPosteriorBound(0.25, 0.5), 0.84, 0.005);
  EXPECT_NEAR(MiaPosteriorBound(1.0 / 128.0, 0.5), 0.56, 0.005);
}

TEST(MiaPosteriorBoundTest, AgreesWithOracle) {
  for (double prior : {0.1, 0.5, 0.8}) {
    for (double mi : {1e-6, 1e-3, 0.05, 0.25, 0.6}) {
      const double oracle = testing::KlInverseOracle(mi, prior);
      if (oracle >= 1.0 - 1e-15) continue;
      EXPECT_NEAR(MiaPosteriorBound(mi, prior), oracle, 1e-11)
          << "mi=" << mi << " prior=" << prior;
    }
  }
}

TEST(MiaPosteriorBoundTest, RoundtripThroughKl) {
  for (double prior : {0.1, 0.5}) {
    for (double mi : {1e-4, 0.01, 0.3}) {
      EXPECT_NEAR(KlBinary(MiaPosteriorBound(mi, prior), prior), mi, 1e-10);
    }
  }
  // At prior 0.1 the KL reaches ln 10, so 2 nats is still invertible.
  EXPECT_NEAR(KlBinary(MiaPosteriorBound(2.0, 0.1), 0.1), 2.0, 1e-9);
  // At prior 1/2 no p < 1 reaches 2 nats.
  EXPECT_EQ(MiaPosteriorBound(2.0, 0.5), 1.0);
}

TEST(MiaPosteriorBoundTest, Errors) {
  EXPECT_THROW(MiaPosteriorBound(-0.1, 0.5), DomainError);
  EXPECT_THROW(MiaPosteriorBound(0.1, 0.0), DomainError);
  EXPECT_THROW(MiaPosteriorBound(0.1, 1.0), DomainError);
}

TEST(DpBoundTest, Formula) {
  EXPECT_EQ(DpEpsToMiaBound(0.0, 0.0), 0.5);
  EXPECT_NEAR(DpEpsToMiaBound(1.0, 1e-5),
              std::exp(1.0) / (1.0 + std::exp(1.0)) + 1e-5, 1e-15);
  EXPECT_NEAR(DpEpsToMiaBound(2.0, 1e-5), 0.8808, 1e-4);
  // Displayed as percentages with two decimals: 73.11% and 52.50%.
  EXPECT_EQ(std::round(DpEpsToMiaBound(1.0, 1e-5) * 1e4), 7311.0);
  EXPECT_EQ(std::round(DpEpsToMiaBound(0.1, 1e-5) * 1e4), 5250.0);
  EXPECT_EQ(DpEpsToMiaBound(50.0, 0.5), 1.0);
  EXPECT_THROW(DpEpsToMiaBound(-1.0, 0.0), DomainError);
}

TEST(MatchedMiTest, MatchedBudgets) {
  EXPECT_NEAR(MatchedMiForDp(2.0, 1e-5, 0.5), 0.33, 0.01);
  EXPECT_NEAR(MatchedMiForDp(6.0, 1e-5, 0.5), 0.68, 0.01);
  EXPECT_EQ(MatchedMiForDp(0.0, 0.0, 0.5), 0.0);
  EXPECT_EQ(MatchedMiForDp(50.0, 0.5, 0.5), kInf);
}

TEST(MatchedEpsTest, InvertsMatchedMi) {
  const double mi = MatchedMiForDp(2.0, 1e-5, 0.5);
  EXPECT_NEAR(MatchedDpEpsilon(mi, 1e-5), 2.0, 1e-8);
  EXPECT_EQ(MatchedDpEpsilon(0.0, 1e-5), 0.0);
  // A vacuous MI bound of 1 is matched by the eps whose DP bound first
  // reaches 1; with delta = 0 no finite eps does.
  EXPECT_NEAR(MatchedDpEpsilon(3.0, 1e-5), std::log((1.0 - 1e-5) / 1e-5), 1e-6);
  EXPECT_EQ(MatchedDpEpsilon(3.0, 0.0), kInf);
}

class ValidateTranscriptTest : public ::testing::Test {
 protected:
  static Transcript Train48(Variant variant, double mi_total, int k = 1) {
    TaskParams params;
    params.num_records = 48;
    const auto task = MakeTask(params);
    MechanismSpec spec;
    spec.variant = variant;
    spec.mi_total = mi_total;
    spec.num_subsets = 16;
    spec.k = k;
    const SubsetDesign design = BuildBalancedDesign(48, 16, 3);
    TrainConfig config;
    config.steps = 150;
    config.seed = 21;
    return Train(*task, config, spec, design, 5).transcript;
  }
};

TEST_F(ValidateTranscriptTest, CompletedRunsPass) {
  const Transcript mi = Train48(Variant::kPacZeroMi, 0.33);
  const ValidationReport report = ValidateTranscript(mi);
  EXPECT_TRUE(report.ok) << report.ToText();
  EXPECT_LE(report.cumulative_mi, 0.33);
  EXPECT_GT(report.disagreement_count, 0);
  EXPECT_EQ(report.records_checked, 150);

  const ValidationReport zpl = ValidateTranscript(Train48(Variant::kPacZeroZpl, 0.0));
  EXPECT_TRUE(zpl.ok) << zpl.ToText();
  EXPECT_EQ(zpl.cumulative_mi, 0.0);

  const ValidationReport agg = ValidateTranscript(Train48(Variant::kPacZeroMi, 0.25, 4));
  EXPECT_TRUE(agg.ok) << agg.ToText();
  EXPECT_EQ(agg.records_checked, 600);
}

TEST_F(ValidateTranscriptTest, InflatedBetaUsedFailsAtThatStep) {
  Transcript transcript = Train48(Variant::kPacZeroMi, 0.33);
  for (StepRecord& record : transcript.records) {
    if (record.branch == Branch::kDisagreement && record.step > 20) {
      record.beta_used *= 1.5;
      const ValidationReport report = ValidateTranscript(transcript);
      EXPECT_FALSE(report.ok);
      EXPECT_EQ(report.failed_step, record.step);
      return;
    }
  }
  FAIL() << "no disagreement step to corrupt";
}

TEST_F(ValidateTranscriptTest, ZplWithNonzeroMiFails) {
  Transcript transcript = Train48(Variant::kPacZeroZpl, 0.0);
  transcript.records[40].cumulative_mi = 1e-3;
  const ValidationReport report = ValidateTranscript(transcript);
  EXPECT_FALSE(report.ok);
  EXPECT_EQ(report.failed_step, 41);
}

TEST_F(ValidateTranscriptTest, OtherFaultsAreCaught) {
  const Transcript clean = Train48(Variant::kPacZeroMi, 0.33);
  std::size_t disagreement = 0;
  while (clean.records[disagreement].branch != Branch::kDisagreement) {
    ++disagreement;
  }

  Transcript wrong_sigma = clean;
  *wrong_sigma.records[disagreement].sigma *= 1.01;
  EXPECT_FALSE(ValidateTranscript(wrong_sigma).ok);

  Transcript wrong_branch = clean;
  wrong_branch.records[disagreement].branch = Branch::kUnanimity;
  EXPECT_FALSE(ValidateTranscript(wrong_branch).ok);

  Transcript flipped_bit = clean;
  flipped_bit.records[disagreement].released_bit *= -1;
  flipped_bit.records[disagreement].release *= -1;
  EXPECT_FALSE(ValidateTranscript(flipped_bit).ok);

  Transcript shrunk_budget = clean;
  shrunk_budget.header.mi_total = 0.1;
  EXPECT_FALSE(ValidateTranscript(shrunk_budget).ok);

  Transcript truncated = clean;
  truncated.records.pop_back();
  EXPECT_FALSE(ValidateTranscript(truncated).ok);

  Transcript wrong_signs = clean;
  std::string& signs = wrong_signs.records[disagreement + 1].signs;
  signs[0] = signs[0] == '+' ? '-' : '+';
  EXPECT_FALSE(ValidateTranscript(wrong_signs).ok);
}

TEST(ValidationReportTest, JsonFields) {
  ValidationReport report;
  report.ok = false;
  report.failed_step = 3;
  report.failed_direction = 0;
  report.failure = "x";
  const auto json = report.ToJson();
  EXPECT_EQ(json.at("failed_step"), 3);
  EXPECT_FALSE(json.at("ok").get<bool>());
  EXPECT_NE(report.ToText().find("step 3"), std::string::npos);
}

}  // namespace
}  // namespace paczero
