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

#include "paczero/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "paczero/errors.h"
#include "paczero/random.h"
#include "paczero/subset_design.h"
#include "paczero/transcript.h"

namespace paczero {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void RequireKnownKeys(const json& object, const std::string& path,
                      std::initializer_list<const char*> keys) {
  if (!object.is_object()) {
    throw SchemaError((path.empty() ? std::string("config") : path) +
                      " must be an object");
  }
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) {
      throw SchemaError("unknown config field '" +
                        (path.empty() ? key : path + "." + key) + "'");
    }
  }
}

template <typename T>
void ReadField(const json& object, const std::string& path, const char* key,
               T& target) {
  if (!object.contains(key)) return;
  try {
    target = object.at(key).get<T>();
  } catch (const json::exception&) {
    throw SchemaError("config field '" + path + "." + key +
                      "' has the wrong type");
  }
}

std::string FormatNumber(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

// Runs fn(0..count-1) on up to `threads` threads; rethrows the first error.
void ParallelFor(int count, int threads, const std::function<void(int)>& fn) {
  std::atomic<int> next{0};
  std::mutex mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  const int n = std::clamp(threads, 1, std::max(count, 1));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& thread : pool) thread.join();
  if (error) std::rethrow_exception(error);
}

json TaskToJson(const TaskParams& task) {
  return {{"name", task.name},
          {"seed", task.seed},
          {"num_records", task.num_records},
          {"test_size", task.test_size},
          {"dimension", task.dimension},
          {"identical_records", task.identical_records}};
}

json MechanismToJson(const MechanismSpec& spec) {
  return {{"variant", ToString(spec.variant)},
          {"mi_total", spec.mi_total},
          {"num_subsets", spec.ResolvedSubsets()},
          {"clip", std::isinf(spec.clip) ? json(nullptr) : json(spec.clip)},
          {"unanimity_tolerance", spec.unanimity_tolerance},
          {"surrogate", ToString(spec.surrogate)},
          {"k", spec.k}};
}

json TrainToJson(const TrainConfig& train) {
  return {{"steps", train.steps},
          {"learning_rate", train.learning_rate},
          {"weight_decay", train.weight_decay},
          {"smoothing", train.smoothing},
          {"seed", train.seed},
          {"load_best_dev", train.load_best_dev},
          {"dev_eval_interval", train.dev_eval_interval},
          {"linear_decay", train.linear_decay}};
}

// The config echo stored in transcript headers. Leaves out everything that
// does not affect the transcript (output location, thread count).
json RunEcho(const ExperimentConfig& config, const TrainConfig& train) {
  return {{"task", TaskToJson(config.task)},
          {"mechanism", MechanismToJson(config.mechanism)},
          {"train", TrainToJson(train)}};
}

std::size_t DrawSecret(std::uint64_t seed, std::size_t num_subsets) {
  Engine rng = MakeEngine(seed, Stream::kSecret);
  return std::uniform_int_distribution<std::size_t>(0, num_subsets - 1)(rng);
}

double UnanimityFraction(const Transcript& transcript) {
  if (transcript.records.empty()) return 0.0;
  return static_cast<double>(transcript.records.back().unanimity_count) /
         static_cast<double>(transcript.records.size());
}

std::string BudgetLabel(const MechanismSpec& spec) {
  if (spec.variant == Variant::kSurrogate) {
    return std::string(ToString(spec.surrogate));
  }
  return std::string(ToString(spec.variant));
}

SummaryRow MeanRow(const std::vector<SummaryRow>& rows) {
  return PooledRows(rows).front();
}

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir + "': " + ec.message());
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

// Runs every seed of `config` and records the first validation failure.
std::vector<RunArtifacts> RunSeeds(const ExperimentConfig& config) {
  std::vector<RunArtifacts> runs(config.seeds.size());
  ParallelFor(static_cast<int>(config.seeds.size()), config.threads,
              [&](int i) { runs[i] = ExecuteRun(config, config.seeds[i]); });
  return runs;
}

void NoteFailures(const std::vector<RunArtifacts>& runs, bool& all_valid,
                  std::string& first_failure) {
  for (const RunArtifacts& run : runs) {
    if (!run.validation.ok && all_valid) {
      all_valid = false;
      first_failure = "seed " + std::to_string(run.seed) + ": step " +
                      std::to_string(run.validation.failed_step.value_or(0)) +
                      ": " + run.validation.failure;
    }
  }
}

SweepTable RunCells(const std::vector<ExperimentConfig>& cells,
                    const std::string& csv_name) {
  SweepTable table;
  std::vector<SummaryRow> csv_rows;
  for (const ExperimentConfig& cell : cells) {
    const std::vector<RunArtifacts> runs = RunSeeds(cell);
    NoteFailures(runs, table.all_valid, table.first_failure);
    std::vector<SummaryRow> rows;
    for (const RunArtifacts& run : runs) rows.push_back(run.row);
    csv_rows.insert(csv_rows.end(), rows.begin(), rows.end());
    table.rows.push_back(MeanRow(rows));
  }
  for (const SummaryRow& row : table.rows) csv_rows.push_back(row);
  double lo = 1.0;
  double hi = 0.0;
  for (const SummaryRow& row : table.rows) {
    lo = std::min(lo, row.test);
    hi = std::max(hi, row.test);
  }
  table.spread = table.rows.empty() ? 0.0 : hi - lo;
  const std::string dir = ResolveOutputDir(cells.front());
  EnsureDir(dir);
  WriteSummaryCsv((fs::path(dir) / csv_name).string(), csv_rows);
  return table;
}

}  // namespace

void ExperimentConfig::Validate() const {
  const auto names = RegisteredTaskNames();
  if (std::find(names.begin(), names.end(), task.name) == names.end()) {
    throw SchemaError("unknown task '" + task.name + "'");
  }
  mechanism.Validate();
  train.Validate();
  if (seeds.empty()) throw DomainError("need at least one seed");
  if (threads < 1) throw DomainError("threads must be >= 1");
}

ExperimentConfig ConfigFromJson(const json& object) {
  RequireKnownKeys(object, "",
                   {"task", "mechanism", "train", "output_dir", "seeds",
                    "threads"});
  ExperimentConfig config;
  if (object.contains("task")) {
    const json& task = object.at("task");
    RequireKnownKeys(task, "task",
                     {"name", "seed", "num_records", "test_size", "dimension",
                      "identical_records"});
    ReadField(task, "task", "name", config.task.name);
    ReadField(task, "task", "seed", config.task.seed);
    ReadField(task, "task", "num_records", config.task.num_records);
    ReadField(task, "task", "test_size", config.task.test_size);
    ReadField(task, "task", "dimension", config.task.dimension);
    ReadField(task, "task", "identical_records", config.task.identical_records);
  }
  if (object.contains("mechanism")) {
    const json& mech = object.at("mechanism");
    RequireKnownKeys(mech, "mechanism",
                     {"variant", "mi_total", "num_subsets", "clip",
                      "unanimity_tolerance", "surrogate", "k"});
    std::string name;
    ReadField(mech, "mechanism", "variant", name);
    if (!name.empty()) config.mechanism.variant = ParseVariant(name);
    name.clear();
    ReadField(mech, "mechanism", "surrogate", name);
    if (!name.empty()) config.mechanism.surrogate = ParseSurrogateMode(name);
    ReadField(mech, "mechanism", "mi_total", config.mechanism.mi_total);
    ReadField(mech, "mechanism", "num_subsets", config.mechanism.num_subsets);
    if (mech.contains("clip") && !mech.at("clip").is_null()) {
      ReadField(mech, "mechanism", "clip", config.mechanism.clip);
    }
    ReadField(mech, "mechanism", "unanimity_tolerance",
              config.mechanism.unanimity_tolerance);
    ReadField(mech, "mechanism", "k", config.mechanism.k);
  }
  if (object.contains("train")) {
    const json& train = object.at("train");
    RequireKnownKeys(train, "train",
                     {"steps", "learning_rate", "weight_decay", "smoothing",
                      "seed", "load_best_dev", "dev_eval_interval",
                      "linear_decay"});
    ReadField(train, "train", "steps", config.train.steps);
    ReadField(train, "train", "learning_rate", config.train.learning_rate);
    ReadField(train, "train", "weight_decay", config.train.weight_decay);
    ReadField(train, "train", "smoothing", config.train.smoothing);
    ReadField(train, "train", "seed", config.train.seed);
    ReadField(train, "train", "load_best_dev", config.train.load_best_dev);
    ReadField(train, "train", "dev_eval_interval",
              config.train.dev_eval_interval);
    ReadField(train, "train", "linear_decay", config.train.linear_decay);
  }
  ReadField(object, "config", "output_dir", config.output_dir);
  ReadField(object, "config", "seeds", config.seeds);
  ReadField(object, "config", "threads", config.threads);
  return config;
}

json ToJson(const ExperimentConfig& config) {
  return {{"task", TaskToJson(config.task)},
          {"mechanism", MechanismToJson(config.mechanism)},
          {"train", TrainToJson(config.train)},
          {"output_dir", config.output_dir},
          {"seeds", config.seeds},
          {"threads", config.threads}};
}

ExperimentConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  json object;
  try {
    object = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw SchemaError("config '" + path + "': " + e.what());
  }
  return ConfigFromJson(object);
}

std::string ResolveOutputDir(const ExperimentConfig& config) {
  const char* root = std::getenv(kOutputRootEnv);
  if (root == nullptr || *root == '\0') return config.output_dir;
  const fs::path dir(config.output_dir);
  return (fs::path(root) / (dir.is_absolute() ? dir.filename() : dir)).string();
}

std::string ToCsvLine(const SummaryRow& row) {
  std::ostringstream out;
  out << row.variant << ',' << FormatNumber(row.budget) << ',' << row.steps
      << ',' << row.seed << ',' << FormatNumber(row.dev) << ','
      << FormatNumber(row.test) << ',' << FormatNumber(row.f) << ','
      << FormatNumber(row.cum_mi) << ',' << FormatNumber(row.wallclock);
  return out.str();
}

void WriteSummaryCsv(const std::string& path,
                     const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << kSummaryHeader << '\n';
  for (const SummaryRow& row : rows) out << ToCsvLine(row) << '\n';
  WriteText(path, out.str());
}

std::vector<SummaryRow> PooledRows(const std::vector<SummaryRow>& rows) {
  if (rows.empty()) throw DomainError("no rows to pool");
  SummaryRow mean = rows.front();
  SummaryRow stddev = rows.front();
  mean.seed = "mean";
  stddev.seed = "std";
  const double n = static_cast<double>(rows.size());
  auto pool = [&](double SummaryRow::*field) {
    double sum = 0.0;
    for (const SummaryRow& row : rows) sum += row.*field;
    const double mu = sum / n;
    double ss = 0.0;
    for (const SummaryRow& row : rows) ss += (row.*field - mu) * (row.*field - mu);
    mean.*field = mu;
    stddev.*field = rows.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  };
  pool(&SummaryRow::dev);
  pool(&SummaryRow::test);
  pool(&SummaryRow::f);
  pool(&SummaryRow::cum_mi);
  pool(&SummaryRow::wallclock);
  return {mean, stddev};
}

RunArtifacts ExecuteRun(const ExperimentConfig& config, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const std::unique_ptr<LossTask> task = MakeTask(config.task);
  const std::size_t m = config.mechanism.ResolvedSubsets();
  const SubsetDesign design = BuildBalancedDesign(
      task->num_records(), m, DeriveSeed(seed, Stream::kDesign));
  TrainConfig train = config.train;
  train.seed = seed;

  RunArtifacts run;
  run.seed = seed;
  run.result =
      Train(*task, train, config.mechanism, design, DrawSecret(seed, m));
  run.result.transcript.header.config = RunEcho(config, train);
  run.validation = ValidateTranscript(run.result.transcript);

  SummaryRow& row = run.row;
  row.variant = BudgetLabel(config.mechanism);
  row.budget = config.mechanism.variant == Variant::kPacZeroMi
                   ? config.mechanism.mi_total
                   : 0.0;
  row.steps = train.steps;
  row.seed = std::to_string(seed);
  row.dev = task->EvalMetric(run.result.params, Split::kDev);
  row.test = task->EvalMetric(run.result.params, Split::kTest);
  row.f = UnanimityFraction(run.result.transcript);
  const auto& records = run.result.transcript.records;
  row.cum_mi = records.empty() ? 0.0 : records.back().cumulative_mi;
  row.wallclock = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return run;
}

RunReport Run(const ExperimentConfig& config) {
  config.Validate();
  RunReport report;
  report.runs = RunSeeds(config);
  NoteFailures(report.runs, report.all_valid, report.first_failure);

  const fs::path dir(ResolveOutputDir(config));
  EnsureDir((dir / "transcripts").string());
  EnsureDir((dir / "validation").string());
  for (const RunArtifacts& run : report.runs) {
    const std::string stem = "seed_" + std::to_string(run.seed);
    WriteTranscriptFile((dir / "transcripts" / (stem + ".jsonl")).string(),
                        run.result.transcript);
    WriteText((dir / "validation" / (stem + ".txt")).string(),
              run.validation.ToText());
    WriteText((dir / "validation" / (stem + ".json")).string(),
              run.validation.ToJson().dump(2) + "\n");
    report.rows.push_back(run.row);
  }
  report.pooled = PooledRows(report.rows);
  std::vector<SummaryRow> csv_rows = report.rows;
  csv_rows.insert(csv_rows.end(), report.pooled.begin(), report.pooled.end());
  WriteSummaryCsv((dir / "summary.csv").string(), csv_rows);
  return report;
}

SweepTable SweepMiPlateau(const ExperimentConfig& config,
                          const std::vector<double>& budgets) {
  config.Validate();
  if (budgets.empty()) throw DomainError("budget list is empty");
  std::vector<ExperimentConfig> cells;
  for (double budget : budgets) {
    ExperimentConfig cell = config;
    cell.mechanism.variant = Variant::kPacZeroMi;
    cell.mechanism.mi_total = budget;
    cell.mechanism.Validate();
    cells.push_back(cell);
  }
  return RunCells(cells, "sweep_mi.csv");
}

std::vector<LadderRow> SweepTLadder(const ExperimentConfig& config,
                                    const std::vector<int>& rungs) {
  config.Validate();
  if (rungs.empty()) throw DomainError("rung list is empty");
  if (!std::is_sorted(rungs.begin(), rungs.end()) || rungs.front() < 1 ||
      std::adjacent_find(rungs.begin(), rungs.end()) != rungs.end()) {
    throw DomainError("rungs must be positive and strictly ascending");
  }
  const std::uint64_t seed = config.seeds.front();
  const std::unique_ptr<LossTask> task = MakeTask(config.task);
  const std::size_t m = config.mechanism.ResolvedSubsets();
  const SubsetDesign design = BuildBalancedDesign(
      task->num_records(), m, DeriveSeed(seed, Stream::kDesign));
  TrainConfig train = config.train;
  train.seed = seed;
  train.steps = rungs.back();

  std::vector<LadderRow> rows;
  std::size_t next = 0;
  auto observer = [&](int step, const ParameterVector& theta) {
    if (next < rungs.size() && step == rungs[next]) {
      rows.push_back({step, task->EvalMetric(theta, Split::kDev),
                      task->EvalMetric(theta, Split::kTest), 0.0});
      ++next;
    }
  };
  Train(*task, train, config.mechanism, design, DrawSecret(seed, m), observer);

  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].dev > rows[best].dev) best = i;
  }
  for (LadderRow& row : rows) row.drift = row.test - rows[best].test;

  const std::string dir = ResolveOutputDir(config);
  EnsureDir(dir);
  std::ostringstream out;
  out << "T,dev,test,drift\n";
  for (const LadderRow& row : rows) {
    out << row.steps << ',' << FormatNumber(row.dev) << ','
        << FormatNumber(row.test) << ',' << FormatNumber(row.drift) << '\n';
  }
  WriteText((fs::path(dir) / "sweep_t.csv").string(), out.str());
  return rows;
}

SweepTable SweepDecomposition(const ExperimentConfig& config) {
  config.Validate();
  std::vector<ExperimentConfig> cells;
  for (SurrogateMode mode :
       {SurrogateMode::kRawFull, SurrogateMode::kQuantFull,
        SurrogateMode::kRawHalf, SurrogateMode::kQuantHalf,
        SurrogateMode::kRandomSign}) {
    ExperimentConfig cell = config;
    cell.mechanism.variant = Variant::kSurrogate;
    cell.mechanism.surrogate = mode;
    cells.push_back(cell);
  }
  for (Variant variant : {Variant::kPacZeroMi, Variant::kPacZeroZpl}) {
    ExperimentConfig cell = config;
    cell.mechanism.variant = variant;
    cells.push_back(cell);
  }
  return RunCells(cells, "sweep_decomp.csv");
}

SweepTable SweepK(const ExperimentConfig& config, const std::vector<int>& ks) {
  config.Validate();
  if (ks.empty()) throw DomainError("K list is empty");
  std::vector<ExperimentConfig> cells;
  for (int k : ks) {
    ExperimentConfig cell = config;
    cell.mechanism.k = k;
    cell.mechanism.Validate();
    cells.push_back(cell);
  }
  SweepTable table = RunCells(cells, "sweep_k.csv");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    table.rows[i].variant += "_k" + std::to_string(ks[i]);
  }
  return table;
}

std::vector<BoundRow> ReportBounds(const std::vector<double>& eps,
                                   double delta,
                                   const std::vector<double>& mi) {
  std::vector<BoundRow> rows;
  for (double e : eps) {
    BoundRow row;
    row.source = "dp";
    row.eps = e;
    row.delta = delta;
    row.mia_bound = DpEpsToMiaBound(e, delta);
    row.mi = MatchedMiForDp(e, delta, 0.5);
    row.note = "matched MI";
    rows.push_back(row);
  }
  for (double budget : mi) {
    BoundRow row;
    row.source = "mi";
    row.mi = budget;
    row.delta = delta;
    row.mia_bound = MiaPosteriorBound(budget, 0.5);
    row.eps = MatchedDpEpsilon(budget, delta);
    row.note = budget == 0.0 ? "DP eps=0 reference" : "matched eps (reference)";
    rows.push_back(row);
  }
  return rows;
}

std::string FormatBounds(const std::vector<BoundRow>& rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-6s %10s %10s %12s %10s  %s\n", "source",
                "eps", "delta", "MI (nats)", "MIA bound", "note");
  out << line;
  for (const BoundRow& row : rows) {
    std::snprintf(line, sizeof(line), "%-6s %10.4g %10.3g %12.6g %10.5f  %s\n",
                  row.source.c_str(), row.eps, row.delta, row.mi,
                  row.mia_bound, row.note.c_str());
    out << line;
  }
  out << kBoundsDisclaimer << '\n';
  return out.str();
}

}  // namespace paczero
