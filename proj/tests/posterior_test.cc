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

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>
#include "paczero/errors.h"

namespace paczero {
namespace {

double Sum(std::span<const double> p) {
  return std::accumulate(p.begin(), p.end(), 0.0);
}

TEST(PosteriorTest, UniformPrior) {
  const Posterior p = Posterior::Uniform(8);
  ASSERT_EQ(p.size(), 8u);
  for (std::size_t m = 0; m < 8; ++m) EXPECT_DOUBLE_EQ(p[m], 0.125);
  EXPECT_THROW(Posterior::Uniform(0), DomainError);
}

TEST(PosteriorTest, BayesRuleAgainstDirectProduct) {
  Posterior p(std::vector<double>{std::log(0.7), std::log(0.2), std::log(0.1)});
  const std::vector<double> likelihood = {0.1, 0.5, 0.9};
  std::vector<double> log_likelihood;
  for (double l : likelihood) log_likelihood.push_back(std::log(l));
  p.Update(log_likelihood);
  const double z = 0.7 * 0.1 + 0.2 * 0.5 + 0.1 * 0.9;
  EXPECT_NEAR(p[0], 0.07 / z, 1e-15);
  EXPECT_NEAR(p[1], 0.10 / z, 1e-15);
  EXPECT_NEAR(p[2], 0.09 / z, 1e-15);
}

TEST(PosteriorTest, SurvivesExtremeLogLikelihoods) {
  Posterior p = Posterior::Uniform(3);
  p.Update(std::vector<double>{-1e6, -1e6 - 1.0, -1e6 - 2.0});
  EXPECT_NEAR(Sum(p.probabilities()), 1.0, 1e-15);
  EXPECT_GT(p[2], 0.0);
  EXPECT_NEAR(p[0] / p[1], std::exp(1.0), 1e-12);
  for (int t = 0; t < 2000; ++t) p.Update(std::vector<double>{0.0, -0.5, -1.0});
  EXPECT_NEAR(Sum(p.probabilities()), 1.0, 1e-15);
  EXPECT_NEAR(p[0], 1.0, 1e-15);
}

TEST(PosteriorTest, SequentialEqualsBatch) {
  Posterior a = Posterior::Uniform(4);
  Posterior b = Posterior::Uniform(4);
  const std::vector<double> l1 = {-0.3, -1.2, -0.1, -2.0};
  const std::vector<double> l2 = {-0.9, -0.2, -0.4, -0.05};
  a.Update(l1);
  a.Update(l2);
  std::vector<double> both(4);
  for (int m = 0; m < 4; ++m) both[m] = l1[m] + l2[m];
  b.Update(both);
  for (std::size_t m = 0; m < 4; ++m) EXPECT_NEAR(a[m], b[m], 1e-15);
}

TEST(PosteriorTest, RejectsBadInput) {
  Posterior p = Posterior::Uniform(2);
  EXPECT_THROW(p.Update(std::vector<double>{0.0}), DomainError);
  EXPECT_THROW(p.Update(std::vector<double>{std::nan(""), 0.0}), NumericError);
  const double ninf = -std::numeric_limits<double>::infinity();
  EXPECT_THROW(p.Update(std::vector<double>{ninf, ninf}), NumericError);
}

}  // namespace
}  // namespace paczero
