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

#ifndef PACZERO_ZO_ENGINE_H_
#define PACZERO_ZO_ENGINE_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace paczero {

// Trainable parameter state. All entries are finite.
class ParameterVector {
 public:
  ParameterVector() = default;
  explicit ParameterVector(std::vector<double> values);
  static ParameterVector Zeros(std::size_t dimension);

  std::size_t dimension() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  double Norm() const;

  friend bool operator==(const ParameterVector&, const ParameterVector&) =
      default;

 private:
  std::vector<double> values_;
};

enum class Split { kDev, kTest };

// A toy learning problem over a universe of records.
class LossTask {
 public:
  virtual ~LossTask() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t num_records() const = 0;
  virtual std::size_t dimension() const = 0;

  // Deterministic in (theta, i).
  virtual double PerSampleLoss(std::span<const double> theta,
                               std::size_t i) const = 0;
  // In [0, 1]; deterministic in theta.
  virtual double EvalMetric(const ParameterVector& theta,
                            Split split) const = 0;
  virtual ParameterVector InitialParameters() const = 0;
};

inline constexpr double kNoClip = std::numeric_limits<double>::infinity();

struct TrainConfig {
  int steps = 500;
  double learning_rate = 0.05;
  double weight_decay = 0.0;
  double smoothing = 1e-3;
  std::uint64_t seed = 0;
  bool load_best_dev = false;
  int dev_eval_interval = 25;
  bool linear_decay = false;

  // Throws DomainError on T < 1, mu <= 0, eta <= 0, lambda < 0 or a
  // nonpositive eval interval.
  void Validate() const;
};

// Step size at 1-based step t.
double LearningRate(const TrainConfig& config, int step);

// Public direction z_{t,k} ~ N(0, I_d), a function of (seed, t, k) only.
std::vector<double> SampleDirection(std::uint64_t seed, int step,
                                    int direction, std::size_t dimension);

// [l_i(theta + mu z) - l_i(theta - mu z)] / (2 mu).
double TwoPointScalar(const LossTask& task, const ParameterVector& theta,
                      std::span<const double> z, double mu, std::size_t i);

// Two-point scalars for every record, in index order.
std::vector<double> TwoPointScalars(const LossTask& task,
                                    const ParameterVector& theta,
                                    std::span<const double> z, double mu);

// sign(g) * min(|g|, c).
double ClipScalar(double g, double c);

// (1 - eta lambda) theta - eta y z.
ParameterVector ApplyUpdate(const ParameterVector& theta, double eta,
                            double lambda, double y, std::span<const double> z);

// (1/K) sum_k y_k z_k, the averaged direction of a K-aggregated step.
std::vector<double> AggregateDirection(std::span<const double> releases,
                                       std::span<const std::vector<double>> directions);

}  // namespace paczero

#endif  // PACZERO_ZO_ENGINE_H_
