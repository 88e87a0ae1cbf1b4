#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aml/cli/dataset.hpp"
#include "aml/cli/run_config.hpp"
#include "aml/graph/pre_encoding.hpp"

namespace aml::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kBadConfig = 2, kTrainingAborted = 3 };

struct RunOutcome {
  std::filesystem::path dir;
  train::TrainLog log;
  int best_epoch = 0;
  std::optional<double> best_val;
  std::optional<double> test_metric;
  double seconds = 0.0;
  cost::CostCounters last_epoch;  // counters of the final epoch
  cost::CostCounters total;       // summed over epochs
  std::int64_t skipped_negatives = 0;
};

// Trains one configuration and writes config.txt, train_log.csv, curve.csv,
// checkpoint.bin and summary.json into `dir`.
RunOutcome execute_run(const RunConfig& config, const Dataset& data,
                       const std::filesystem::path& dir,
                       graph::PreEncodingCache* cache = nullptr);

int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err);

struct CompareOptions {
  std::vector<std::string> variants{"aml", "sym_gnn"};
  int seeds = 1;  // seeds config.seed, config.seed + 1, ...
  bool ablations = false;
};

// One comparison.csv row per (variant, seed) run plus a run directory each.
int cmd_compare(const RunConfig& config, const CompareOptions& options, std::ostream& out,
                std::ostream& err);

int cmd_gen(const graph::SyntheticSpec& spec, std::uint64_t seed,
            const std::filesystem::path& dir, std::ostream& out, std::ostream& err);

// Reloads a run directory and scores one of its splits.
int cmd_eval(const std::filesystem::path& run_dir, const std::string& split,
             const std::optional<std::string>& metric, std::ostream& out, std::ostream& err);

// Full command-line entry point.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace aml::cli
