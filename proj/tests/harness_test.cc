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

#include "paczero/harness.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include "paczero/errors.h"
#include "paczero/transcript.h"

namespace paczero {
namespace {

namespace fs = std::filesystem;

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    unsetenv(kOutputRootEnv);
    dir_ = fs::temp_directory_path() /
           ("paczero_harness_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  ExperimentConfig Small() const {
    ExperimentConfig config;
    config.task.num_records = 32;
    config.mechanism.num_subsets = 16;
    config.train.steps = 60;
    config.output_dir = dir_.string();
    config.seeds = {1, 2, 3};
    return config;
  }

  fs::path dir_;
};

TEST_F(HarnessTest, ConfigJsonRoundtrip) {
  ExperimentConfig config = Small();
  config.mechanism.clip = 2.5;
  config.train.load_best_dev = true;
  const ExperimentConfig parsed = ConfigFromJson(ToJson(config));
  EXPECT_EQ(ToJson(parsed), ToJson(config));
}

TEST_F(HarnessTest, ConfigErrorsNameTheField) {
  try {
    ConfigFromJson({{"mechanism", {{"mi_totl", 0.3}}}});
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("mechanism.mi_totl"), std::string::npos);
  }
  try {
    ConfigFromJson({{"train", {{"steps", "many"}}}});
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("train.steps"), std::string::npos);
  }
  EXPECT_THROW(ConfigFromJson({{"mechanism", {{"variant", "dpsgd"}}}}),
               SchemaError);
  ExperimentConfig bad = Small();
  bad.task.name = "nope";
  EXPECT_THROW(bad.Validate(), SchemaError);
}

TEST_F(HarnessTest, RunWritesArtifacts) {
  ExperimentConfig config = Small();
  config.mechanism.variant = Variant::kPacZeroZpl;
  config.threads = 3;
  const RunReport report = paczero::Run(config);
  EXPECT_TRUE(report.all_valid) << report.first_failure;
  ASSERT_EQ(report.rows.size(), 3u);
  for (const SummaryRow& row : report.rows) {
    EXPECT_EQ(row.cum_mi, 0.0);
    EXPECT_GT(row.f, 0.0);
    EXPECT_LT(row.f, 1.0);
  }
  for (int seed : {1, 2, 3}) {
    const std::string stem = "seed_" + std::to_string(seed);
    EXPECT_TRUE(fs::exists(dir_ / "transcripts" / (stem + ".jsonl")));
    EXPECT_TRUE(fs::exists(dir_ / "validation" / (stem + ".txt")));
    EXPECT_TRUE(fs::exists(dir_ / "validation" / (stem + ".json")));
  }
  const std::string csv = ReadAll(dir_ / "summary.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kSummaryHeader);
  EXPECT_NE(csv.find(",mean,"), std::string::npos);
  EXPECT_NE(csv.find(",std,"), std::string::npos);

  // The stored transcript validates and echoes the run config.
  const Transcript transcript =
      ReadTranscriptFile((dir_ / "transcripts" / "seed_2.jsonl").string());
  EXPECT_TRUE(ValidateTranscript(transcript).ok);
  EXPECT_EQ(transcript.header.config.at("train").at("seed"), 2);
}

TEST_F(HarnessTest, MiRunStaysWithinBudget) {
  ExperimentConfig config = Small();
  config.mechanism.mi_total = 0.33;
  const RunReport report = paczero::Run(config);
  EXPECT_TRUE(report.all_valid);
  for (const SummaryRow& row : report.rows) EXPECT_LE(row.cum_mi, 0.33);
}

TEST_F(HarnessTest, TranscriptsAreByteIdentical) {
  ExperimentConfig config = Small();
  config.seeds = {7};
  paczero::Run(config);
  const std::string first = ReadAll(dir_ / "transcripts" / "seed_7.jsonl");
  fs::remove_all(dir_);
  config.threads = 4;
  paczero::Run(config);
  EXPECT_EQ(ReadAll(dir_ / "transcripts" / "seed_7.jsonl"), first);
  EXPECT_FALSE(first.empty());
}

TEST_F(HarnessTest, PooledRowsUseSampleStd) {
  std::vector<SummaryRow> rows(3);
  rows[0].test = 0.8;
  rows[1].test = 0.9;
  rows[2].test = 1.0;
  const auto pooled = PooledRows(rows);
  EXPECT_NEAR(pooled[0].test, 0.9, 1e-15);
  EXPECT_NEAR(pooled[1].test, 0.1, 1e-15);
  EXPECT_EQ(PooledRows({rows[0]})[1].test, 0.0);
}

TEST_F(HarnessTest, OutputRootOverride) {
  ExperimentConfig config = Small();
  config.output_dir = "relative/run";
  setenv(kOutputRootEnv, dir_.c_str(), 1);
  EXPECT_EQ(ResolveOutputDir(config), (dir_ / "relative" / "run").string());
  unsetenv(kOutputRootEnv);
  EXPECT_EQ(ResolveOutputDir(config), "relative/run");
}

TEST_F(HarnessTest, SweepsHaveExpectedShape) {
  ExperimentConfig config = Small();
  config.seeds = {1};
  const SweepTable single = SweepMiPlateau(config, {0.2});
  ASSERT_EQ(single.rows.size(), 1u);
  config.mechanism.mi_total = 0.2;
  EXPECT_EQ(single.rows[0].test, paczero::Run(config).rows[0].test);

  const SweepTable decomp = SweepDecomposition(config);
  EXPECT_EQ(decomp.rows.size(), 7u);
  EXPECT_TRUE(decomp.all_valid);
  EXPECT_TRUE(fs::exists(dir_ / "sweep_decomp.csv"));

  const auto ladder = SweepTLadder(config, {20, 40, 80});
  ASSERT_EQ(ladder.size(), 3u);
  EXPECT_EQ(ladder[2].steps, 80);
  EXPECT_THROW(SweepTLadder(config, {40, 20}), DomainError);

  const SweepTable ks = SweepK(config, {1, 2});
  EXPECT_EQ(ks.rows.size(), 2u);
  EXPECT_TRUE(ks.all_valid);
}

TEST_F(HarnessTest, BoundsTable) {
  const auto rows = ReportBounds({2.0, 6.0}, 1e-5, {0.0});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(rows[0].mia_bound, 0.8808, 1e-4);
  EXPECT_NEAR(rows[0].mi, 0.33, 0.01);
  EXPECT_NEAR(rows[1].mi, 0.68, 0.01);
  EXPECT_EQ(rows[2].mia_bound, 0.5);
  EXPECT_EQ(rows[2].note, "DP eps=0 reference");
  EXPECT_NE(FormatBounds(rows).find("not DP guarantees"), std::string::npos);
}

}  // namespace
}  // namespace paczero
