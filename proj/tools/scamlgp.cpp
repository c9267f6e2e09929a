#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "scamlgp/benchmarks.hpp"
#include "scamlgp/errors.hpp"
#include "scamlgp/harness.hpp"
#include "scamlgp/verify.hpp"

namespace {

// 0 success, 1 check failure, 2 invalid config, 3 I/O error.
constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kBadConfig = 2;
constexpr int kIoError = 3;

int do_verify(const std::string& suite) {
  const auto reports = scamlgp::run_verify(suite);
  bool all_passed = true;
  for (const auto& r : reports) {
    std::printf("%s: %s (observed %.6g, threshold %.6g, %.2fs)\n", r.name.c_str(),
                r.passed ? "PASS" : "FAIL", r.observed, r.threshold, r.elapsed_seconds);
    if (!r.details.empty()) std::printf("  %s\n", r.details.c_str());
    all_passed = all_passed && r.passed;
  }
  return all_passed ? kOk : kCheckFailed;
}

int do_tabular_check(const std::string& path) {
  const scamlgp::TabularTask table = scamlgp::load_tabular(path);
  Eigen::Index best_row = 0;
  table.values.maxCoeff(&best_row);
  std::printf("ok: %d rows, %d parameters\n", static_cast<int>(table.size()),
              static_cast<int>(table.dim()));
  for (std::size_t j = 0; j < table.column_names.size(); ++j) {
    std::printf("  %s: %d levels\n", table.column_names[j].c_str(),
                static_cast<int>(table.levels[j].size()));
  }
  std::printf("best value %.10g at row %d\n", table.values(best_row),
              static_cast<int>(best_row));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta-learned Bayesian optimization over synthetic and tabular benchmarks"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a BO sweep and write results CSVs");
  std::string config_path;
  run->add_option("--config", config_path, "JSON config file (flags below override it)");
  std::string benchmark, method, seeds_text, out;
  int meta_tasks = 0, points_per_task = 0, iterations = 0, threads = 0;
  int fit_restarts = 0, candidate_pool = 0, continuous_restarts = 0;
  double noise_std = 0.0, beta_sqrt = 0.0;
  bool timings = false, warm_start = false;
  auto* o_benchmark =
      run->add_option("--benchmark", benchmark, "branin | hartmann3 | hartmann6 | tabular:<path>");
  auto* o_method = run->add_option("--method", method, "scaml | gpbo");
  auto* o_meta_tasks = run->add_option("--meta-tasks", meta_tasks, "number of meta tasks");
  auto* o_points = run->add_option("--points-per-task", points_per_task, "observations per meta task");
  auto* o_iters = run->add_option("--iterations", iterations, "BO iterations per seed");
  auto* o_seeds = run->add_option("--seeds", seeds_text, "count (\"32\" -> 1..32) or list \"3,7,9\"");
  auto* o_noise = run->add_option("--noise-std", noise_std, "observation noise std");
  auto* o_beta = run->add_option("--beta-sqrt", beta_sqrt, "UCB exploration coefficient");
  auto* o_out = run->add_option("--out", out, "results CSV path");
  auto* o_fit_restarts = run->add_option("--fit-restarts", fit_restarts, "MAP fit restarts");
  auto* o_pool = run->add_option("--candidate-pool", candidate_pool, "acquisition candidate pool");
  auto* o_cont = run->add_option("--continuous-restarts", continuous_restarts,
                                 "local refinements per acquisition");
  auto* o_threads = run->add_option("--threads", threads, "worker threads (0 = auto)");
  auto* o_timings =
      run->add_flag("--timings", timings, "record wall-clock columns (breaks bitwise determinism)");
  auto* o_warm = run->add_flag("--warm-start-weights", warm_start,
                               "seed each refit with the previous test-task parameters");

  auto* verify = app.add_subcommand("verify", "Run invariant suites against fixed seeds");
  std::string suite = "all";
  verify->add_option("suite", suite, "theorem1 | eq9 | psd | gradients | scaling | all");

  auto* tabular = app.add_subcommand("tabular-check", "Validate a lookup-table CSV");
  std::string table_path;
  tabular->add_option("path", table_path, "table file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  const bool checking_table = tabular->parsed();
  try {
    if (run->parsed()) {
      scamlgp::ExperimentConfig config;
      if (!config_path.empty()) config = scamlgp::ExperimentConfig::from_json_file(config_path);
      if (o_benchmark->count() > 0) config.benchmark = benchmark;
      if (o_method->count() > 0) config.method = method;
      if (o_meta_tasks->count() > 0) config.meta_tasks = meta_tasks;
      if (o_points->count() > 0) config.points_per_task = points_per_task;
      if (o_iters->count() > 0) config.iterations = iterations;
      if (o_seeds->count() > 0) config.seeds = scamlgp::parse_seeds(seeds_text);
      if (o_noise->count() > 0) config.noise_std = noise_std;
      if (o_beta->count() > 0) config.beta_sqrt = beta_sqrt;
      if (o_out->count() > 0) config.output_path = out;
      if (o_fit_restarts->count() > 0) config.fit_restarts = fit_restarts;
      if (o_pool->count() > 0) config.candidate_pool = candidate_pool;
      if (o_cont->count() > 0) config.continuous_restarts = continuous_restarts;
      if (o_threads->count() > 0) config.threads = threads;
      if (o_timings->count() > 0) config.record_timings = timings;
      if (o_warm->count() > 0) config.warm_start_weights = warm_start;
      config.validate();

      const int failed = scamlgp::run_and_write(config);
      std::printf("wrote %s and %s\n", config.output_path.c_str(),
                  scamlgp::summary_path_for(config.output_path).c_str());
      if (failed > 0) {
        std::printf("%d seed(s) failed; their rows are omitted\n", failed);
      }
      return kOk;
    }
    if (verify->parsed()) return do_verify(suite);
    if (checking_table) return do_tabular_check(table_path);
  } catch (const scamlgp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const scamlgp::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIoError;
  } catch (const scamlgp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return checking_table ? kCheckFailed : kBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kOk;
}
