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

#include "paczero/zo_engine.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "paczero/errors.h"
#include "paczero/random.h"

namespace paczero {

namespace {

struct ProbePair {
  std::vector<double> plus;
  std::vector<double> minus;
};

ProbePair MakeProbes(const ParameterVector& theta, std::span<const double> z,
                     double mu) {
  if (z.size() != theta.dimension()) {
    throw DomainError("direction and parameter dimensions differ");
  }
  ProbePair probes{std::vector<double>(z.size()),
                   std::vector<double>(z.size())};
  for (std::size_t j = 0; j < z.size(); ++j) {
    probes.plus[j] = theta[j] + mu * z[j];
    probes.minus[j] = theta[j] - mu * z[j];
  }
  return probes;
}

double ScalarAt(const LossTask& task, const ParameterVector& theta,
                const ProbePair& probes, double mu, std::size_t i) {
  const double lp = task.PerSampleLoss(probes.plus, i);
  const double lm = task.PerSampleLoss(probes.minus, i);
  if (!std::isfinite(lp) || !std::isfinite(lm)) {
    std::ostringstream msg;
    msg << "non-finite loss at record " << i << " (|theta| = " << theta.Norm()
        << ")";
    throw NumericError(msg.str());
  }
  return (lp - lm) / (2.0 * mu);
}

}  // namespace

ParameterVector::ParameterVector(std::vector<double> values)
    : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw NumericError("parameter " + std::to_string(i) + " is not finite");
    }
  }
}

ParameterVector ParameterVector::Zeros(std::size_t dimension) {
  return ParameterVector(std::vector<double>(dimension, 0.0));
}

double ParameterVector::Norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

void TrainConfig::Validate() const {
  if (steps < 1) throw DomainError("steps must be >= 1");
  if (!(learning_rate > 0.0)) throw DomainError("learning_rate must be > 0");
  if (!(weight_decay >= 0.0)) throw DomainError("weight_decay must be >= 0");
  if (!(smoothing > 0.0)) throw DomainError("smoothing mu must be > 0");
  if (dev_eval_interval < 1) throw DomainError("dev_eval_interval must be >= 1");
}

double LearningRate(const TrainConfig& config, int step) {
  if (!config.linear_decay) return config.learning_rate;
  const double fraction = static_cast<double>(step - 1) / config.steps;
  return config.learning_rate * (1.0 - fraction);
}

std::vector<double> SampleDirection(std::uint64_t seed, int step,
                                    int direction, std::size_t dimension) {
  Engine engine =
      MakeEngine(seed, Stream::kDirections,
                 {static_cast<std::uint64_t>(step),
                  static_cast<std::uint64_t>(direction)});
  std::normal_distribution<double> normal;
  std::vector<double> z(dimension);
  for (double& v : z) v = normal(engine);
  return z;
}

double TwoPointScalar(const LossTask& task, const ParameterVector& theta,
                      std::span<const double> z, double mu, std::size_t i) {
  const ProbePair probes = MakeProbes(theta, z, mu);
  return ScalarAt(task, theta, probes, mu, i);
}

std::vector<double> TwoPointScalars(const LossTask& task,
                                    const ParameterVector& theta,
                                    std::span<const double> z, double mu) {
  const ProbePair probes = MakeProbes(theta, z, mu);
  std::vector<double> scalars(task.num_records());
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    scalars[i] = ScalarAt(task, theta, probes, mu, i);
  }
  return scalars;
}

double ClipScalar(double g, double c) {
  if (std::isinf(c)) return g;
  return std::copysign(std::min(std::abs(g), c), g);
}

ParameterVector ApplyUpdate(const ParameterVector& theta, double eta,
                            double lambda, double y,
                            std::span<const double> z) {
  if (z.size() != theta.dimension()) {
    throw DomainError("direction and parameter dimensions differ");
  }
  const double decay = 1.0 - eta * lambda;
  std::vector<double> next(theta.dimension());
  for (std::size_t j = 0; j < next.size(); ++j) {
    next[j] = decay * theta[j] - eta * y * z[j];
  }
  return ParameterVector(std::move(next));
}

std::vector<double> AggregateDirection(
    std::span<const double> releases,
    std::span<const std::vector<double>> directions) {
  if (releases.size() != directions.size() || directions.empty()) {
    throw DomainError("need one release per direction");
  }
  const double k = static_cast<double>(directions.size());
  std::vector<double> sum(directions.front().size(), 0.0);
  for (std::size_t d = 0; d < directions.size(); ++d) {
    for (std::size_t j = 0; j < sum.size(); ++j) {
      sum[j] += releases[d] * directions[d][j];
    }
  }
  for (double& v : sum) v /= k;
  return sum;
}

}  // namespace paczero
