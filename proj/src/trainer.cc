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

#include "paczero/trainer.h"

#include "paczero/errors.h"

namespace paczero {

TrainResult Train(const LossTask& task, const TrainConfig& config,
                  const MechanismSpec& spec, const SubsetDesign& design,
                  std::size_t j_star, const StepObserver& observer) {
  config.Validate();
  spec.Validate();
  if (design.num_records() != task.num_records()) {
    throw DomainError("design universe size differs from the task's");
  }

  TrainResult result;
  TranscriptHeader& header = result.transcript.header;
  header.variant = spec.variant;
  if (spec.variant == Variant::kSurrogate) header.surrogate = spec.surrogate;
  header.mi_total = spec.variant == Variant::kPacZeroMi ? spec.mi_total : 0.0;
  header.steps = config.steps;
  header.k = spec.k;
  header.num_records = design.num_records();
  header.num_subsets = design.num_subsets();
  header.unanimity_tolerance = spec.unanimity_tolerance;
  header.clip = spec.clip;
  header.seed = config.seed;
  header.design_hash = design.Hash();

  Mechanism mechanism(spec, design, j_star, config.seed, config.steps);
  const std::size_t d = task.dimension();
  ParameterVector theta = task.InitialParameters();
  ParameterVector best = theta;
  double best_dev = -1.0;
  auto& records = result.transcript.records;
  records.reserve(static_cast<std::size_t>(config.steps) * spec.k);

  for (int t = 1; t <= config.steps; ++t) {
    const double eta = LearningRate(config, t);
    if (spec.k == 1) {
      const std::vector<double> z = SampleDirection(config.seed, t, 0, d);
      const std::vector<double> scalars =
          TwoPointScalars(task, theta, z, config.smoothing);
      StepRecord record = mechanism.Release(t, scalars);
      theta = ApplyUpdate(theta, eta, config.weight_decay, record.release, z);
      records.push_back(std::move(record));
    } else {
      std::vector<std::vector<double>> directions;
      std::vector<std::vector<double>> scalars;
      for (int k = 0; k < spec.k; ++k) {
        directions.push_back(SampleDirection(config.seed, t, k, d));
        scalars.push_back(
            TwoPointScalars(task, theta, directions.back(), config.smoothing));
      }
      std::vector<StepRecord> step_records =
          mechanism.ReleaseAggregate(t, scalars);
      std::vector<double> releases;
      for (const StepRecord& record : step_records) {
        releases.push_back(record.release);
      }
      theta = ApplyUpdate(theta, eta, config.weight_decay, 1.0,
                          AggregateDirection(releases, directions));
      for (StepRecord& record : step_records) {
        records.push_back(std::move(record));
      }
    }

    if (t % config.dev_eval_interval == 0 || t == config.steps) {
      const double dev = task.EvalMetric(theta, Split::kDev);
      result.dev_history.push_back({t, dev});
      if (dev > best_dev) {
        best_dev = dev;
        best = theta;
        result.best_step = t;
      }
    }
    if (observer) observer(t, theta);
  }

  result.final_params = theta;
  result.params = config.load_best_dev ? best : theta;
  const auto p = mechanism.posterior().probabilities();
  result.final_posterior.assign(p.begin(), p.end());
  return result;
}

}  // namespace paczero
