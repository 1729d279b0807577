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

#ifndef PACZERO_TASKS_H_
#define PACZERO_TASKS_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paczero/zo_engine.h"

namespace paczero {

// Labeled feature rows, row-major.
struct LabeledData {
  std::size_t feature_dim = 0;
  std::vector<double> features;
  std::vector<int> labels;  // in {-1, +1}

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(features).subspan(i * feature_dim,
                                                     feature_dim);
  }
};

struct TaskParams {
  std::string name = "separable-blobs";
  std::uint64_t seed = 0;
  std::size_t num_records = 128;
  std::size_t test_size = 512;
  // quadratic only: parameter dimension and whether all centers coincide.
  std::size_t dimension = 4;
  bool identical_records = false;
};

// Binary logistic regression on two Gaussian clusters in R^10, separable
// along a hidden unit direction with margin 0.5. Parameters are the weights
// followed by a bias. Dev split holds N/4 fresh points, test `test_size`.
class SeparableBlobsTask : public LossTask {
 public:
  static constexpr std::size_t kFeatureDim = 10;

  explicit SeparableBlobsTask(const TaskParams& params);

  std::string_view name() const override { return "separable-blobs"; }
  std::size_t num_records() const override { return train_.size(); }
  std::size_t dimension() const override { return kFeatureDim + 1; }
  double PerSampleLoss(std::span<const double> theta,
                       std::size_t i) const override;
  double EvalMetric(const ParameterVector& theta, Split split) const override;
  ParameterVector InitialParameters() const override;

  const LabeledData& train() const { return train_; }
  std::span<const double> separating_direction() const { return direction_; }

 private:
  std::vector<double> direction_;
  LabeledData train_;
  LabeledData dev_;
  LabeledData test_;
};

// 10 -> 16 -> 1 tanh MLP with logistic loss on a noisy XOR layout in the
// first two coordinates; the other eight are distractor noise.
class XorMlpTask : public LossTask {
 public:
  static constexpr std::size_t kInputDim = 10;
  static constexpr std::size_t kHidden = 16;

  explicit XorMlpTask(const TaskParams& params);

  std::string_view name() const override { return "xor-mlp"; }
  std::size_t num_records() const override { return train_.size(); }
  std::size_t dimension() const override {
    return kInputDim * kHidden + kHidden + kHidden + 1;
  }
  double PerSampleLoss(std::span<const double> theta,
                       std::size_t i) const override;
  double EvalMetric(const ParameterVector& theta, Split split) const override;
  ParameterVector InitialParameters() const override;

 private:
  double Logit(std::span<const double> theta, std::span<const double> x) const;

  std::uint64_t seed_;
  LabeledData train_;
  LabeledData dev_;
  LabeledData test_;
};

// l_i(theta) = 0.5 |theta - a_i|^2. The metric is 1 / (1 + |theta - a_bar|^2).
class QuadraticTask : public LossTask {
 public:
  explicit QuadraticTask(const TaskParams& params);
  QuadraticTask(std::size_t dimension, std::vector<std::vector<double>> centers);

  std::string_view name() const override { return "quadratic"; }
  std::size_t num_records() const override { return centers_.size(); }
  std::size_t dimension() const override { return dimension_; }
  double PerSampleLoss(std::span<const double> theta,
                       std::size_t i) const override;
  double EvalMetric(const ParameterVector& theta, Split split) const override;
  ParameterVector InitialParameters() const override;

 private:
  std::size_t dimension_;
  std::vector<std::vector<double>> centers_;
  std::vector<double> mean_;
};

// Numerically stable log(1 + exp(-margin)).
double LogisticLoss(double margin);

// Builds a registered task: "separable-blobs", "xor-mlp" or "quadratic".
std::unique_ptr<LossTask> MakeTask(const TaskParams& params);

// Names accepted by MakeTask.
std::span<const std::string_view> RegisteredTaskNames();

}  // namespace paczero

#endif  // PACZERO_TASKS_H_
