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

#include <array>
#include <cmath>
#include <random>

#include "paczero/errors.h"
#include "paczero/random.h"

namespace paczero {
namespace {

// Sub-stream counters within Stream::kTaskData.
constexpr std::uint64_t kGeometryDraw = 0;
constexpr std::uint64_t kTrainDraw = 1;
constexpr std::uint64_t kDevDraw = 2;
constexpr std::uint64_t kTestDraw = 3;
constexpr std::uint64_t kInitDraw = 4;

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double LinearScore(std::span<const double> theta, std::span<const double> x) {
  return Dot(theta.first(x.size()), x) + theta[x.size()];
}

LabeledData SampleBlobs(std::uint64_t seed, std::uint64_t draw, std::size_t n,
                        std::span<const double> direction) {
  constexpr double kClusterOffset = 1.5;
  constexpr double kAlongSpread = 0.5;
  constexpr double kOrthogonalSpread = 3.0;
  constexpr double kMargin = 0.5;
  Engine engine = MakeEngine(seed, Stream::kTaskData, {draw});
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.5);

  const std::size_t dim = direction.size();
  LabeledData data;
  data.feature_dim = dim;
  data.features.reserve(n * dim);
  std::vector<double> x(dim);
  while (data.size() < n) {
    const int y = coin(engine) ? 1 : -1;
    for (double& v : x) v = kOrthogonalSpread * normal(engine);
    const double along = y * kClusterOffset + kAlongSpread * normal(engine);
    if (y * along < kMargin) continue;
    const double projection = Dot(x, direction);
    for (std::size_t j = 0; j < dim; ++j) {
      x[j] += (along - projection) * direction[j];
    }
    data.features.insert(data.features.end(), x.begin(), x.end());
    data.labels.push_back(y);
  }
  return data;
}

LabeledData SampleXor(std::uint64_t seed, std::uint64_t draw, std::size_t n) {
  constexpr double kCornerNoise = 0.3;
  constexpr double kDistractorSpread = 0.5;
  Engine engine = MakeEngine(seed, Stream::kTaskData, {draw});
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.5);

  LabeledData data;
  data.feature_dim = XorMlpTask::kInputDim;
  data.features.reserve(n * data.feature_dim);
  for (std::size_t i = 0; i < n; ++i) {
    const double c1 = coin(engine) ? 1.0 : -1.0;
    const double c2 = coin(engine) ? 1.0 : -1.0;
    data.features.push_back(c1 + kCornerNoise * normal(engine));
    data.features.push_back(c2 + kCornerNoise * normal(engine));
    for (std::size_t j = 2; j < data.feature_dim; ++j) {
      data.features.push_back(kDistractorSpread * normal(engine));
    }
    data.labels.push_back(c1 * c2 > 0.0 ? 1 : -1);
  }
  return data;
}

template <typename ScoreFn>
double Accuracy(const LabeledData& data, ScoreFn score) {
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int predicted = score(data.row(i)) >= 0.0 ? 1 : -1;
    if (predicted == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

void CheckRecordCount(const TaskParams& params) {
  if (params.num_records < 1) throw DomainError("task needs >= 1 record");
}

}  // namespace

double LogisticLoss(double margin) {
  if (margin > 0.0) return std::log1p(std::exp(-margin));
  return -margin + std::log1p(std::exp(margin));
}

SeparableBlobsTask::SeparableBlobsTask(const TaskParams& params) {
  CheckRecordCount(params);
  Engine engine = MakeEngine(params.seed, Stream::kTaskData, {kGeometryDraw});
  std::normal_distribution<double> normal;
  direction_.resize(kFeatureDim);
  for (double& v : direction_) v = normal(engine);
  const double norm = std::sqrt(Dot(direction_, direction_));
  for (double& v : direction_) v /= norm;

  train_ = SampleBlobs(params.seed, kTrainDraw, params.num_records, direction_);
  dev_ = SampleBlobs(params.seed, kDevDraw,
                     std::max<std::size_t>(1, params.num_records / 4),
                     direction_);
  test_ = SampleBlobs(params.seed, kTestDraw, params.test_size, direction_);
}

double SeparableBlobsTask::PerSampleLoss(std::span<const double> theta,
                                         std::size_t i) const {
  return LogisticLoss(train_.labels[i] * LinearScore(theta, train_.row(i)));
}

double SeparableBlobsTask::EvalMetric(const ParameterVector& theta,
                                      Split split) const {
  const LabeledData& data = split == Split::kDev ? dev_ : test_;
  return Accuracy(data, [&](std::span<const double> x) {
    return LinearScore(theta.values(), x);
  });
}

ParameterVector SeparableBlobsTask::InitialParameters() const {
  return ParameterVector::Zeros(dimension());
}

XorMlpTask::XorMlpTask(const TaskParams& params) : seed_(params.seed) {
  CheckRecordCount(params);
  train_ = SampleXor(params.seed, kTrainDraw, params.num_records);
  dev_ = SampleXor(params.seed, kDevDraw,
                   std::max<std::size_t>(1, params.num_records / 4));
  test_ = SampleXor(params.seed, kTestDraw, params.test_size);
}

// Layout: W1 (kHidden x kInputDim, row-major), b1, w2, b2.
double XorMlpTask::Logit(std::span<const double> theta,
                         std::span<const double> x) const {
  const std::size_t b1 = kHidden * kInputDim;
  const std::size_t w2 = b1 + kHidden;
  const std::size_t b2 = w2 + kHidden;
  double out = theta[b2];
  for (std::size_t h = 0; h < kHidden; ++h) {
    const double pre =
        Dot(theta.subspan(h * kInputDim, kInputDim), x) + theta[b1 + h];
    out += theta[w2 + h] * std::tanh(pre);
  }
  return out;
}

double XorMlpTask::PerSampleLoss(std::span<const double> theta,
                                 std::size_t i) const {
  return LogisticLoss(train_.labels[i] * Logit(theta, train_.row(i)));
}

double XorMlpTask::EvalMetric(const ParameterVector& theta, Split split) const {
  const LabeledData& data = split == Split::kDev ? dev_ : test_;
  return Accuracy(data, [&](std::span<const double> x) {
    return Logit(theta.values(), x);
  });
}

ParameterVector XorMlpTask::InitialParameters() const {
  Engine engine = MakeEngine(seed_, Stream::kTaskData, {kInitDraw});
  std::normal_distribution<double> normal(
      0.0, 1.0 / std::sqrt(static_cast<double>(kInputDim)));
  std::vector<double> theta(dimension());
  for (double& v : theta) v = normal(engine);
  return ParameterVector(std::move(theta));
}

QuadraticTask::QuadraticTask(const TaskParams& params)
    : dimension_(params.dimension) {
  CheckRecordCount(params);
  if (dimension_ < 1) throw DomainError("quadratic task needs dimension >= 1");
  Engine engine = MakeEngine(params.seed, Stream::kTaskData, {kTrainDraw});
  std::normal_distribution<double> normal;
  centers_.resize(params.num_records, std::vector<double>(dimension_));
  for (auto& center : centers_) {
    for (double& v : center) v = normal(engine);
  }
  if (params.identical_records) {
    for (auto& center : centers_) center = centers_.front();
  }
  mean_.assign(dimension_, 0.0);
  for (const auto& center : centers_) {
    for (std::size_t j = 0; j < dimension_; ++j) mean_[j] += center[j];
  }
  for (double& v : mean_) v /= static_cast<double>(centers_.size());
}

QuadraticTask::QuadraticTask(std::size_t dimension,
                             std::vector<std::vector<double>> centers)
    : dimension_(dimension), centers_(std::move(centers)) {
  if (centers_.empty()) throw DomainError("quadratic task needs >= 1 record");
  mean_.assign(dimension_, 0.0);
  for (const auto& center : centers_) {
    if (center.size() != dimension_) {
      throw DomainError("quadratic center has wrong dimension");
    }
    for (std::size_t j = 0; j < dimension_; ++j) mean_[j] += center[j];
  }
  for (double& v : mean_) v /= static_cast<double>(centers_.size());
}

double QuadraticTask::PerSampleLoss(std::span<const double> theta,
                                    std::size_t i) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < dimension_; ++j) {
    const double diff = theta[j] - centers_[i][j];
    sum += diff * diff;
  }
  return 0.5 * sum;
}

double QuadraticTask::EvalMetric(const ParameterVector& theta, Split) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < dimension_; ++j) {
    const double diff = theta[j] - mean_[j];
    sum += diff * diff;
  }
  return 1.0 / (1.0 + sum);
}

ParameterVector QuadraticTask::InitialParameters() const {
  return ParameterVector::Zeros(dimension_);
}

std::span<const std::string_view> RegisteredTaskNames() {
  static constexpr std::array<std::string_view, 3> kNames = {
      "separable-blobs", "xor-mlp", "quadratic"};
  return kNames;
}

std::unique_ptr<LossTask> MakeTask(const TaskParams& params) {
  if (params.name == "separable-blobs") {
    return std::make_unique<SeparableBlobsTask>(params);
  }
  if (params.name == "xor-mlp") return std::make_unique<XorMlpTask>(params);
  if (params.name == "quadratic") return std::make_unique<QuadraticTask>(params);
  throw SchemaError("unknown task '" + params.name + "'");
}

}  // namespace paczero
