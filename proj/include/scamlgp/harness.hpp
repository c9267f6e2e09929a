#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scamlgp/benchmarks.hpp"
#include "scamlgp/bo.hpp"

namespace scamlgp {

struct ExperimentConfig {
  std::string benchmark = "branin";  // branin | hartmann3 | hartmann6 | tabular:<path>
  std::string method = "scaml";      // scaml | gpbo
  int meta_tasks = 8;
  int points_per_task = 32;
  int iterations = 30;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8};
  double noise_std = 1.0;
  double beta_sqrt = 3.0;
  int candidate_pool = 1024;
  int continuous_restarts = 8;
  int fit_restarts = 5;
  std::string output_path = "results.csv";
  bool record_timings = false;  // keeps default runs bitwise reproducible
  bool warm_start_weights = false;
  int threads = 0;  // 0 = one worker per seed up to hardware concurrency

  // Throws ConfigError on unknown keys or malformed values.
  static ExperimentConfig from_json_file(const std::string& path);
  void validate() const;
};

// "32" -> {1..32}; "3,7,9" -> {3, 7, 9}.
std::vector<std::uint64_t> parse_seeds(const std::string& text);

struct RunResult {
  std::uint64_t seed = 0;
  double true_max = 0.0;
  std::vector<TraceRecord> trace;  // x rewritten to native units for reporting
  bool failed = false;
  std::string error;
};

// Runs every configured seed (in parallel workers), one BO loop per seed.
// Meta data generation depends only on the seed, never on the method, so
// method comparisons share identical tasks. Per-seed failures are recorded
// in the result rather than aborting the sweep.
std::vector<RunResult> run_experiment(const ExperimentConfig& config);

// Per-iteration rows for every successful seed, doubles rendered with %.17g.
// Also writes the companion summary (per-iteration mean and standard error
// across seeds) next to it. Throws if no run succeeded.
void write_results_csv(const std::vector<RunResult>& results, const std::string& path);
std::string summary_path_for(const std::string& results_path);

// Full `run` subcommand body: execute and persist. Returns the number of
// failed seeds.
int run_and_write(const ExperimentConfig& config);

// Per-seed inputs of a synthetic-family run. Both exposed so tests can pin
// the guarantee that they depend only on (config benchmark fields, seed),
// never on the method.
SyntheticTask seed_test_task(const ExperimentConfig& config, std::uint64_t seed);
MetaData seed_meta_data(const ExperimentConfig& config, std::uint64_t seed);

}  // namespace scamlgp
