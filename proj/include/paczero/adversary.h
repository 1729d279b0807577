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

#ifndef PACZERO_ADVERSARY_H_
#define PACZERO_ADVERSARY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "paczero/mechanism.h"
#include "paczero/subset_design.h"
#include "paczero/tasks.h"
#include "paczero/transcript.h"
#include "paczero/zo_engine.h"

namespace paczero {

struct ReplayResult {
  std::vector<double> posterior;  // over the M candidate subsets
  ParameterVector final_params;
  // Steps whose recomputed subset signs differ from the recorded ones.
  int sign_mismatches = 0;
};

// Rebuilds the parameter trajectory and the posterior over j* from public
// information only: the task universe, the design, the directions regenerated
// from config.seed, and the released values (Y_t, and the noisy release and
// sigma on disagreement steps). Throws DomainError for surrogate transcripts
// or a design whose hash differs from the header's.
ReplayResult ReplayPosterior(const Transcript& transcript, const LossTask& task,
                             const SubsetDesign& design,
                             const TrainConfig& config,
                             const MechanismSpec& spec);

struct AttackTrial {
  std::size_t target = 0;
  bool true_membership = false;
  bool guess = false;
  double membership_probability = 0.5;
};

// Probabilities within this distance of 1/2 count as ties.
inline constexpr double kAttackTieTolerance = 1e-12;

// sum_m p[m] 1[i in S_m].
double MembershipProbability(std::span<const double> posterior,
                             const SubsetDesign& design, std::size_t target);

// Bayes-optimal guess: member iff P(i in S_j*) >= 1/2, ties to member.
bool MembershipAttack(std::span<const double> posterior,
                      const SubsetDesign& design, std::size_t target);

struct MiaExperimentConfig {
  TaskParams task;
  TrainConfig train;
  MechanismSpec mechanism;
  int trials = 2000;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct MiaExperimentResult {
  int trials = 0;
  int successes = 0;
  double empirical_rate = 0.0;
  double bound = 0.5;      // posterior bound at the run's MI, prior 1/2
  double threshold = 0.5;  // bound + 3 sqrt(0.25 / trials)
  bool pass = false;
  // Largest coordinatewise gap between the replayed and the mechanism's
  // posterior over all trials.
  double max_replay_deviation = 0.0;
  int sign_mismatches = 0;
  double mean_unanimity_fraction = 0.0;
};

// Each trial draws a fresh dataset, design and secret from a per-trial seed,
// trains, replays the posterior and attacks a uniformly chosen record.
// Throws DomainError when trials < 100 or the mechanism is a surrogate.
MiaExperimentResult EmpiricalMiaExperiment(const MiaExperimentConfig& config);

}  // namespace paczero

#endif  // PACZERO_ADVERSARY_H_
