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

#include "paczero/adversary.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <random>
#include <thread>

#include "paczero/accounting.h"
#include "paczero/errors.h"
#include "paczero/posterior.h"
#include "paczero/random.h"
#include "paczero/trainer.h"

namespace paczero {
namespace {

void UpdateOnRelease(Posterior& posterior, std::span<const int> signs,
                     double noisy, double sigma) {
  std::vector<double> log_likelihood(signs.size());
  for (std::size_t m = 0; m < signs.size(); ++m) {
    const double residual = noisy - signs[m];
    log_likelihood[m] = -residual * residual / (2.0 * sigma * sigma);
  }
  posterior.Update(log_likelihood);
}

struct TrialOutcome {
  bool success = false;
  double replay_deviation = 0.0;
  int sign_mismatches = 0;
  double unanimity_fraction = 0.0;
};

TrialOutcome RunTrial(const MiaExperimentConfig& config, int trial) {
  const std::uint64_t trial_seed =
      DeriveSeed(config.seed, Stream::kTrial, {static_cast<std::uint64_t>(trial)});
  TaskParams task_params = config.task;
  task_params.seed = trial_seed;
  const std::unique_ptr<LossTask> task = MakeTask(task_params);
  const std::size_t n = task->num_records();
  const std::size_t m = config.mechanism.ResolvedSubsets();
  const SubsetDesign design =
      BuildBalancedDesign(n, m, DeriveSeed(trial_seed, Stream::kDesign));

  Engine secret_rng = MakeEngine(trial_seed, Stream::kSecret);
  const std::size_t j_star =
      std::uniform_int_distribution<std::size_t>(0, m - 1)(secret_rng);
  Engine attack_rng = MakeEngine(trial_seed, Stream::kAttack);
  const std::size_t target =
      std::uniform_int_distribution<std::size_t>(0, n - 1)(attack_rng);

  TrainConfig train = config.train;
  train.seed = trial_seed;
  const TrainResult result = Train(*task, train, config.mechanism, design, j_star);
  const ReplayResult replay =
      ReplayPosterior(result.transcript, *task, design, train, config.mechanism);

  TrialOutcome outcome;
  for (std::size_t j = 0; j < m; ++j) {
    outcome.replay_deviation =
        std::max(outcome.replay_deviation,
                 std::abs(replay.posterior[j] - result.final_posterior[j]));
  }
  outcome.sign_mismatches = replay.sign_mismatches;
  outcome.success = MembershipAttack(replay.posterior, design, target) ==
                    design.Contains(j_star, target);
  const auto& records = result.transcript.records;
  outcome.unanimity_fraction =
      records.empty() ? 0.0
                      : static_cast<double>(records.back().unanimity_count) /
                            static_cast<double>(records.size());
  return outcome;
}

}  // namespace

ReplayResult ReplayPosterior(const Transcript& transcript, const LossTask& task,
                             const SubsetDesign& design,
                             const TrainConfig& config,
                             const MechanismSpec& spec) {
  const TranscriptHeader& header = transcript.header;
  if (!header.IsPrivate()) {
    throw DomainError("surrogate transcripts carry no posterior to replay");
  }
  if (header.design_hash != design.Hash()) {
    throw DomainError("design hash differs from the transcript header");
  }
  if (design.num_records() != task.num_records()) {
    throw DomainError("design universe size differs from the task's");
  }
  const int k_count = std::max(header.k, 1);
  if (transcript.records.size() !=
      static_cast<std::size_t>(header.steps) * k_count) {
    throw SchemaError("transcript record count differs from steps * k");
  }

  Posterior posterior = Posterior::Uniform(design.num_subsets());
  ReplayResult result;
  ParameterVector theta = task.InitialParameters();
  const std::size_t d = task.dimension();

  for (int t = 1; t <= header.steps; ++t) {
    const double eta = LearningRate(config, t);
    std::vector<std::vector<double>> directions;
    std::vector<double> releases;
    for (int k = 0; k < k_count; ++k) {
      const StepRecord& record =
          transcript.records[static_cast<std::size_t>(t - 1) * k_count + k];
      directions.push_back(SampleDirection(config.seed, t, k, d));
      const std::vector<double> scalars =
          TwoPointScalars(task, theta, directions.back(), config.smoothing);
      const std::vector<int> signs = SubsetSigns(scalars, design, spec.clip);
      if (EncodeSigns(signs) != record.signs) ++result.sign_mismatches;

      if (record.branch == Branch::kDisagreement) {
        if (!record.sigma || !record.pre_quant_release) {
          throw SchemaError("disagreement record lacks sigma or release");
        }
        UpdateOnRelease(posterior, signs, *record.pre_quant_release,
                        *record.sigma);
      }
      releases.push_back(record.release);
    }
    if (k_count == 1) {
      theta = ApplyUpdate(theta, eta, config.weight_decay, releases[0],
                          directions[0]);
    } else {
      theta = ApplyUpdate(theta, eta, config.weight_decay, 1.0,
                          AggregateDirection(releases, directions));
    }
  }

  const auto p = posterior.probabilities();
  result.posterior.assign(p.begin(), p.end());
  result.final_params = std::move(theta);
  return result;
}

double MembershipProbability(std::span<const double> posterior,
                             const SubsetDesign& design, std::size_t target) {
  if (posterior.size() != design.num_subsets()) {
    throw DomainError("posterior size differs from M");
  }
  double p = 0.0;
  for (std::size_t m = 0; m < posterior.size(); ++m) {
    if (design.Contains(m, target)) p += posterior[m];
  }
  return p;
}

bool MembershipAttack(std::span<const double> posterior,
                      const SubsetDesign& design, std::size_t target) {
  return MembershipProbability(posterior, design, target) >=
         0.5 - kAttackTieTolerance;
}

MiaExperimentResult EmpiricalMiaExperiment(const MiaExperimentConfig& config) {
  if (config.trials < 100) throw DomainError("need at least 100 trials");
  if (!config.mechanism.IsPrivate()) {
    throw DomainError("the attack experiment needs a private mechanism");
  }
  config.mechanism.Validate();
  config.train.Validate();

  std::vector<TrialOutcome> outcomes(config.trials);
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (int i = next++; i < config.trials; i = next++) {
      try {
        outcomes[i] = RunTrial(config, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = config.trials;
      }
    }
  };
  const int threads = std::clamp(config.threads, 1, config.trials);
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& thread : pool) thread.join();
  if (error) std::rethrow_exception(error);

  MiaExperimentResult result;
  result.trials = config.trials;
  double unanimity = 0.0;
  for (const TrialOutcome& outcome : outcomes) {
    result.successes += outcome.success ? 1 : 0;
    result.max_replay_deviation =
        std::max(result.max_replay_deviation, outcome.replay_deviation);
    result.sign_mismatches += outcome.sign_mismatches;
    unanimity += outcome.unanimity_fraction;
  }
  result.empirical_rate =
      static_cast<double>(result.successes) / static_cast<double>(config.trials);
  result.mean_unanimity_fraction = unanimity / config.trials;
  const double mi = config.mechanism.variant == Variant::kPacZeroMi
                        ? config.mechanism.mi_total
                        : 0.0;
  result.bound = MiaPosteriorBound(mi, 0.5);
  result.threshold = result.bound + 3.0 * std::sqrt(0.25 / config.trials);
  result.pass = result.empirical_rate <= result.threshold;
  return result;
}

}  // namespace paczero
