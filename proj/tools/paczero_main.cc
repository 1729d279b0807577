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

// Command-line driver for training runs, sweeps, attacks and transcript
// validation.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "paczero/accounting.h"
#include "paczero/adversary.h"
#include "paczero/harness.h"
#include "paczero/transcript.h"

namespace {

using namespace paczero;

constexpr int kInvariantFailed = 1;
constexpr int kUsageError = 2;

// Flag overrides applied on top of the config file.
struct Overrides {
  std::string config_path;
  std::optional<std::string> output_dir;
  std::vector<std::uint64_t> seeds;
  std::optional<int> threads;
  std::optional<std::string> task;
  std::optional<std::size_t> num_records;
  std::optional<std::uint64_t> task_seed;
  std::optional<std::string> variant;
  std::optional<std::string> surrogate;
  std::optional<double> mi_total;
  std::optional<std::size_t> num_subsets;
  std::optional<double> clip;
  std::optional<int> k;
  std::optional<int> steps;
  std::optional<double> learning_rate;
  std::optional<double> weight_decay;
  std::optional<double> smoothing;
  std::optional<int> dev_eval_interval;
  bool load_best_dev = false;
  bool linear_decay = false;
};

void AddConfigOptions(CLI::App* app, Overrides& o) {
  app->add_option("-c,--config", o.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  app->add_option("-o,--output-dir", o.output_dir, "output directory");
  app->add_option("--seeds", o.seeds, "replication seeds")->delimiter(',');
  app->add_option("--threads", o.threads, "concurrent runs");
  app->add_option("--task", o.task, "task name");
  app->add_option("--num-records", o.num_records, "universe size N");
  app->add_option("--task-seed", o.task_seed, "dataset seed");
  app->add_option("--variant", o.variant,
                  "paczero_mi | paczero_zpl | surrogate");
  app->add_option("--surrogate", o.surrogate,
                  "raw_full | quant_full | raw_half | quant_half | random_sign");
  app->add_option("--mi-total", o.mi_total, "total MI budget (nats)");
  app->add_option("--num-subsets", o.num_subsets, "number of subsets M");
  app->add_option("--clip", o.clip, "per-sample clip threshold");
  app->add_option("--k", o.k, "directions aggregated per step");
  app->add_option("--steps", o.steps, "training steps T");
  app->add_option("--lr", o.learning_rate, "learning rate");
  app->add_option("--weight-decay", o.weight_decay, "weight decay");
  app->add_option("--mu", o.smoothing, "two-point smoothing radius");
  app->add_option("--dev-eval-interval", o.dev_eval_interval,
                  "steps between dev evaluations");
  app->add_flag("--pac-load-best-dev", o.load_best_dev,
                "report the dev-best checkpoint");
  app->add_flag("--linear-decay", o.linear_decay, "linear learning-rate decay");
}

ExperimentConfig BuildConfig(const Overrides& o) {
  ExperimentConfig config =
      o.config_path.empty() ? ExperimentConfig{} : LoadConfigFile(o.config_path);
  if (o.output_dir) config.output_dir = *o.output_dir;
  if (!o.seeds.empty()) config.seeds = o.seeds;
  if (o.threads) config.threads = *o.threads;
  if (o.task) config.task.name = *o.task;
  if (o.num_records) config.task.num_records = *o.num_records;
  if (o.task_seed) config.task.seed = *o.task_seed;
  if (o.variant) config.mechanism.variant = ParseVariant(*o.variant);
  if (o.surrogate) config.mechanism.surrogate = ParseSurrogateMode(*o.surrogate);
  if (o.mi_total) config.mechanism.mi_total = *o.mi_total;
  if (o.num_subsets) config.mechanism.num_subsets = *o.num_subsets;
  if (o.clip) config.mechanism.clip = *o.clip;
  if (o.k) config.mechanism.k = *o.k;
  if (o.steps) config.train.steps = *o.steps;
  if (o.learning_rate) config.train.learning_rate = *o.learning_rate;
  if (o.weight_decay) config.train.weight_decay = *o.weight_decay;
  if (o.smoothing) config.train.smoothing = *o.smoothing;
  if (o.dev_eval_interval) config.train.dev_eval_interval = *o.dev_eval_interval;
  if (o.load_best_dev) config.train.load_best_dev = true;
  if (o.linear_decay) config.train.linear_decay = true;
  config.Validate();
  return config;
}

void PrintRows(const std::vector<SummaryRow>& rows) {
  std::cout << kSummaryHeader << '\n';
  for (const SummaryRow& row : rows) std::cout << ToCsvLine(row) << '\n';
}

int Fail(const std::string& invariant) {
  std::cerr << "invariant failed: " << invariant << '\n';
  return kInvariantFailed;
}

int CmdRun(const Overrides& o) {
  const ExperimentConfig config = BuildConfig(o);
  const RunReport report = Run(config);
  PrintRows(report.rows);
  PrintRows(report.pooled);
  std::cout << "output: " << ResolveOutputDir(config) << '\n';
  if (!report.all_valid) return Fail("transcript replay: " + report.first_failure);
  return 0;
}

int ReportSweep(const SweepTable& table, const ExperimentConfig& config) {
  PrintRows(table.rows);
  std::cout << "spread(test): " << table.spread << '\n';
  std::cout << "output: " << ResolveOutputDir(config) << '\n';
  if (!table.all_valid) return Fail("transcript replay: " + table.first_failure);
  return 0;
}

int CmdValidate(const std::string& path, bool as_json) {
  const Transcript transcript = ReadTranscriptFile(path);
  const ValidationReport report = ValidateTranscript(transcript);
  if (as_json) {
    std::cout << report.ToJson().dump(2) << '\n';
  } else {
    std::cout << report.ToText();
  }
  if (!report.ok) {
    return Fail("step " + std::to_string(report.failed_step.value_or(0)) +
                ": " + report.failure);
  }
  return 0;
}

int CmdAttack(const Overrides& o, int trials, std::uint64_t seed) {
  const ExperimentConfig config = BuildConfig(o);
  MiaExperimentConfig attack;
  attack.task = config.task;
  attack.train = config.train;
  attack.mechanism = config.mechanism;
  attack.trials = trials;
  attack.seed = seed;
  attack.threads = config.threads;
  const MiaExperimentResult result = EmpiricalMiaExperiment(attack);
  std::printf("trials %d  successes %d  rate %.4f  bound %.4f  threshold %.4f\n",
              result.trials, result.successes, result.empirical_rate,
              result.bound, result.threshold);
  std::printf("max replay deviation %.3g  sign mismatches %d  mean f %.3f\n",
              result.max_replay_deviation, result.sign_mismatches,
              result.mean_unanimity_fraction);
  if (result.max_replay_deviation > 1e-9) return Fail("replay fidelity");
  if (!result.pass) return Fail("bound soundness");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PAC-private zeroth-order training"};
  app.require_subcommand(1);

  Overrides o;
  CLI::App* run = app.add_subcommand("run", "train and validate each seed");
  AddConfigOptions(run, o);

  std::vector<double> budgets = {1e-4, 1e-3, 1e-2, 1e-1, 0.33, 0.68};
  CLI::App* sweep_mi = app.add_subcommand("sweep-mi", "MI budget plateau");
  AddConfigOptions(sweep_mi, o);
  sweep_mi->add_option("--budgets", budgets, "MI budgets")->delimiter(',');

  std::vector<int> rungs = {500, 1000, 2000};
  CLI::App* sweep_t = app.add_subcommand("sweep-t", "T ladder on one trajectory");
  AddConfigOptions(sweep_t, o);
  sweep_t->add_option("--rungs", rungs, "ascending step counts")->delimiter(',');

  CLI::App* sweep_decomp =
      app.add_subcommand("sweep-decomp", "surrogate decomposition, 7 rows");
  AddConfigOptions(sweep_decomp, o);

  std::vector<int> ks = {1, 2, 4};
  CLI::App* sweep_k = app.add_subcommand("sweep-k", "direction aggregation");
  AddConfigOptions(sweep_k, o);
  sweep_k->add_option("--ks", ks, "values of K")->delimiter(',');

  int trials = 2000;
  std::uint64_t attack_seed = 0;
  CLI::App* attack = app.add_subcommand("attack", "empirical membership attack");
  AddConfigOptions(attack, o);
  attack->add_option("--trials", trials, "independent trials");
  attack->add_option("--attack-seed", attack_seed, "experiment seed");

  std::string transcript_path;
  bool as_json = false;
  CLI::App* validate = app.add_subcommand("validate", "re-derive a transcript");
  validate->add_option("transcript", transcript_path, "transcript .jsonl")
      ->required()
      ->check(CLI::ExistingFile);
  validate->add_flag("--json", as_json, "machine-readable report");

  std::vector<double> eps = {0.1, 1.0, 2.0, 6.0};
  std::vector<double> mis = {0.0, 1.0 / 128.0, 0.25, 0.33, 0.68, 2.0};
  double delta = 1e-5;
  CLI::App* bounds = app.add_subcommand("bounds", "MI / MIA / DP-eps table");
  bounds->add_option("--eps", eps, "DP epsilons")->delimiter(',');
  bounds->add_option("--mi", mis, "MI budgets (nats)")->delimiter(',');
  bounds->add_option("--delta", delta, "DP delta");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return CmdRun(o);
    if (sweep_mi->parsed()) {
      const ExperimentConfig config = BuildConfig(o);
      return ReportSweep(SweepMiPlateau(config, budgets), config);
    }
    if (sweep_t->parsed()) {
      const ExperimentConfig config = BuildConfig(o);
      std::cout << "T,dev,test,drift\n";
      for (const LadderRow& row : SweepTLadder(config, rungs)) {
        std::cout << row.steps << ',' << row.dev << ',' << row.test << ','
                  << row.drift << '\n';
      }
      return 0;
    }
    if (sweep_decomp->parsed()) {
      const ExperimentConfig config = BuildConfig(o);
      return ReportSweep(SweepDecomposition(config), config);
    }
    if (sweep_k->parsed()) {
      const ExperimentConfig config = BuildConfig(o);
      return ReportSweep(SweepK(config, ks), config);
    }
    if (attack->parsed()) return CmdAttack(o, trials, attack_seed);
    if (validate->parsed()) return CmdValidate(transcript_path, as_json);
    if (bounds->parsed()) {
      std::cout << FormatBounds(ReportBounds(eps, delta, mis));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}
