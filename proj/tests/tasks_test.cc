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

#include "paczero/tasks.h"

#include <cmath>
#include <memory>

#include <gtest/gtest.h>
#include "paczero/errors.h"

namespace paczero {
namespace {

TEST(LogisticLossTest, StableAtExtremes) {
  EXPECT_NEAR(LogisticLoss(0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(LogisticLoss(800.0), 0.0, 1e-300);
  EXPECT_NEAR(LogisticLoss(-800.0), 800.0, 1e-9);
  EXPECT_NEAR(LogisticLoss(2.0), std::log1p(std::exp(-2.0)), 1e-15);
}

TEST(SeparableBlobsTest, SeparableWithMargin) {
  TaskParams params;
  params.seed = 5;
  const SeparableBlobsTask task(params);
  EXPECT_EQ(task.num_records(), 128u);
  EXPECT_EQ(task.dimension(), 11u);
  const auto u = task.separating_direction();
  const LabeledData& data = task.train();
  for (std::size_t i = 0; i < data.size(); ++i) {
    double along = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) along += u[j] * data.row(i)[j];
    EXPECT_GE(data.labels[i] * along, 0.5);
  }
  std::vector<double> w(u.begin(), u.end());
  w.push_back(0.0);
  EXPECT_EQ(task.EvalMetric(ParameterVector(w), Split::kTest), 1.0);
  EXPECT_EQ(task.EvalMetric(ParameterVector(w), Split::kDev), 1.0);
}

TEST(SeparableBlobsTest, DeterministicInSeed) {
  TaskParams params;
  params.seed = 2;
  const SeparableBlobsTask a(params);
  const SeparableBlobsTask b(params);
  params.seed = 3;
  const SeparableBlobsTask c(params);
  EXPECT_EQ(a.train().features, b.train().features);
  EXPECT_NE(a.train().features, c.train().features);
}

TEST(XorMlpTest, Shape) {
  TaskParams params;
  params.name = "xor-mlp";
  const auto task = MakeTask(params);
  EXPECT_EQ(task->dimension(), 10u * 16u + 16u + 16u + 1u);
  EXPECT_EQ(task->num_records(), 128u);
  const double metric =
      task->EvalMetric(task->InitialParameters(), Split::kTest);
  EXPECT_GE(metric, 0.0);
  EXPECT_LE(metric, 1.0);
}

TEST(QuadraticTest, IdenticalRecordsShareTheCenter) {
  TaskParams params;
  params.name = "quadratic";
  params.identical_records = true;
  params.num_records = 6;
  const auto task = MakeTask(params);
  const ParameterVector theta({0.1, 0.2, 0.3, 0.4});
  for (std::size_t i = 1; i < 6; ++i) {
    EXPECT_EQ(task->PerSampleLoss(theta.values(), i),
              task->PerSampleLoss(theta.values(), 0));
  }
}

TEST(MakeTaskTest, UnknownName) {
  TaskParams params;
  params.name = "imagenet";
  EXPECT_THROW(MakeTask(params), SchemaError);
  EXPECT_EQ(RegisteredTaskNames().size(), 3u);
}

}  // namespace
}  // namespace paczero
