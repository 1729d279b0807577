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

#ifndef PACZERO_HARNESS_H_
#define PACZERO_HARNESS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "paczero/accounting.h"
#include "paczero/mechanism.h"
#include "paczero/tasks.h"
#include "paczero/trainer.h"
#include "paczero/zo_engine.h"

namespace paczero {

// Overrides the output directory of every experiment when set.
inline constexpr const char* kOutputRootEnv = "PACZERO_OUTPUT_ROOT";

struct ExperimentConfig {
  TaskParams task;
  MechanismSpec mechanism;
  TrainConfig train;  // train.seed is replaced by each replication seed
  std::string output_dir = "paczero_out";
  std::vector<std::uint64_t> seeds = {0};
  int threads = 1;

  // Throws SchemaError on unknown task names, DomainError on invalid values.
  void Validate() const;
};

// Strict: unknown keys and mistyped values throw SchemaError naming the
// field path, e.g. "mechanism.mi_total". Missing keys keep their defaults.
ExperimentConfig ConfigFromJson(const nlohmann::json& object);
nlohmann::json ToJson(const ExperimentConfig& config);
ExperimentConfig LoadConfigFile(const std::string& path);

// The output directory after applying PACZERO_OUTPUT_ROOT.
std::string ResolveOutputDir(const ExperimentConfig& config);

// One row of a summary CSV. f is the fraction of releases that took the
// unanimity branch.
struct SummaryRow {
  std::string variant;
  double budget = 0.0;
  int steps = 0;
  std::string seed;
  double dev = 0.0;
  double test = 0.0;
  double f = 0.0;
  double cum_mi = 0.0;
  double wallclock = 0.0;  // seconds
};

inline constexpr const char* kSummaryHeader =
    "variant,budget,T,seed,dev,test,f,cum_mi,wallclock";

std::string ToCsvLine(const SummaryRow& row);
void WriteSummaryCsv(const std::string& path, const std::vector<SummaryRow>& rows);

// Pooled rows with seed "mean" and "std" (sample std, n - 1 denominator;
// 0 for a single row).
std::vector<SummaryRow> PooledRows(const std::vector<SummaryRow>& rows);

// Everything one training run produces, before anything is written.
struct RunArtifacts {
  std::uint64_t seed = 0;
  TrainResult result;
  ValidationReport validation;
  SummaryRow row;
};

// One run with a design and secret drawn from the seed.
RunArtifacts ExecuteRun(const ExperimentConfig& config, std::uint64_t seed);

struct RunReport {
  std::vector<RunArtifacts> runs;
  std::vector<SummaryRow> rows;    // one per seed
  std::vector<SummaryRow> pooled;  // mean, std
  bool all_valid = true;
  std::string first_failure;  // empty when all transcripts validate
};

// Runs every seed (concurrently up to config.threads), then writes
// transcripts/seed_<s>.jsonl, validation/seed_<s>.{txt,json} and
// summary.csv under the output directory.
RunReport Run(const ExperimentConfig& config);

struct SweepTable {
  std::vector<SummaryRow> rows;
  double spread = 0.0;  // max - min test metric across cells
  bool all_valid = true;
  std::string first_failure;
};

// The same recipe at each MI budget (paczero_mi). Cells are seed means;
// writes sweep_mi.csv.
SweepTable SweepMiPlateau(const ExperimentConfig& config,
                          const std::vector<double>& budgets);

struct LadderRow {
  int steps = 0;
  double dev = 0.0;
  double test = 0.0;
  double drift = 0.0;  // test - test at the best-dev rung
};

// One trajectory of length max(rungs), evaluated at every rung; first seed
// only. Writes sweep_t.csv.
std::vector<LadderRow> SweepTLadder(const ExperimentConfig& config,
                                    const std::vector<int>& rungs);

// The five surrogates, paczero_mi and paczero_zpl on the same task and
// seeds. Writes sweep_decomp.csv.
SweepTable SweepDecomposition(const ExperimentConfig& config);

// The recipe at each number of aggregated directions. Writes sweep_k.csv.
SweepTable SweepK(const ExperimentConfig& config, const std::vector<int>& ks);

struct BoundRow {
  std::string source;  // "dp" or "mi"
  double eps = 0.0;
  double delta = 0.0;
  double mi = 0.0;
  double mia_bound = 0.5;
  std::string note;
};

inline constexpr const char* kBoundsDisclaimer =
    "DP epsilon values are numerical reference annotations matched on MIA "
    "success at prior 1/2. They are not DP guarantees.";

std::vector<BoundRow> ReportBounds(const std::vector<double>& eps,
                                   double delta, const std::vector<double>& mi);
std::string FormatBounds(const std::vector<BoundRow>& rows);

}  // namespace paczero

#endif  // PACZERO_HARNESS_H_
