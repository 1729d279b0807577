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

#ifndef PACZERO_TRAINER_H_
#define PACZERO_TRAINER_H_

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "paczero/mechanism.h"
#include "paczero/subset_design.h"
#include "paczero/transcript.h"
#include "paczero/zo_engine.h"

namespace paczero {

struct DevEvaluation {
  int step = 0;
  double metric = 0.0;
};

struct TrainResult {
  ParameterVector params;        // dev-best when load_best_dev, else final
  ParameterVector final_params;
  Transcript transcript;
  std::vector<DevEvaluation> dev_history;
  int best_step = 0;
  std::vector<double> final_posterior;  // mechanism-internal p_T
};

// Called after every step with the updated parameters.
using StepObserver = std::function<void(int step, const ParameterVector&)>;

// Runs T steps of zeroth-order training with the given release mechanism.
// Directions depend on config.seed only; the mechanism noise stream is
// derived from the same seed but is independent of the directions.
TrainResult Train(const LossTask& task, const TrainConfig& config,
                  const MechanismSpec& spec, const SubsetDesign& design,
                  std::size_t j_star, const StepObserver& observer = {});

}  // namespace paczero

#endif  // PACZERO_TRAINER_H_
