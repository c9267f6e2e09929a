#include "scamlgp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "scamlgp/errors.hpp"
#include "scamlgp/surrogates.hpp"

namespace scamlgp {

namespace {

bool is_tabular(const std::string& benchmark) { return benchmark.rfind("tabular:", 0) == 0; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t parse_u64(const std::string& token) {
  if (token.empty()) throw ConfigError("empty seed token");
  for (char c : token) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ConfigError("bad seed token '" + token + "'");
    }
  }
  errno = 0;
  char* end = nullptr;
  std::uint64_t value = std::strtoull(token.c_str(), &end, 10);
  if (errno == ERANGE || end != token.c_str() + token.size()) {
    throw ConfigError("bad seed token '" + token + "'");
  }
  return value;
}

// Tables resolved from a tabular:<path> benchmark, shared across seeds.
struct TabularSet {
  std::vector<TabularTask> tables;
};

TabularSet load_tabular_set(const std::string& spec) {
  std::string path = spec.substr(std::string("tabular:").size());
  if (path.empty()) throw ConfigError("tabular benchmark needs a path: tabular:<path>");
  namespace fs = std::filesystem;
  std::error_code ec;
  TabularSet set;
  if (fs::is_directory(path, ec)) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (!entry.is_regular_file()) continue;
      const auto p = entry.path();
      if (p.extension() == ".csv") files.push_back(p.string());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) set.tables.push_back(load_tabular(f));
  } else if (fs::exists(path, ec)) {
    set.tables.push_back(load_tabular(path));
  } else {
    throw IoError("tabular benchmark path not found: " + path);
  }
  if (set.tables.empty()) throw ConfigError("no .csv tables under " + path);
  const auto& first = set.tables.front();
  for (std::size_t i = 1; i < set.tables.size(); ++i) {
    if (set.tables[i].column_names != first.column_names || set.tables[i].levels != first.levels) {
      throw ConfigError("tabular tables disagree on columns or levels under " + path);
    }
  }
  return set;
}

// Stream ids off the per-seed root rng. Fixed slots keep every consumer
// independent of the others' draw counts.
constexpr std::uint64_t kTaskStream = 1;
constexpr std::uint64_t kMetaStream = 2;
constexpr std::uint64_t kBoStream = 3;
constexpr std::uint64_t kNoiseStream = 4;
constexpr std::uint64_t kFitStream = 5;

std::unique_ptr<SurrogateModel> make_surrogate(const ExperimentConfig& config, Eigen::Index dim,
                                               const std::vector<DataSet>& meta_data, Rng& fit_rng) {
  if (config.method == "gpbo") {
    return std::make_unique<GpSurrogate>(dim, GpHyperPriors::defaults(), config.fit_restarts);
  }
  return std::make_unique<ScamlSurrogate>(dim, meta_data, GpHyperPriors::defaults(),
                                          TestTaskPriors::defaults(), config.fit_restarts,
                                          config.warm_start_weights, fit_rng);
}

RunResult run_synthetic_seed(const ExperimentConfig& config, std::uint64_t seed) {
  const Family family = family_from_name(config.benchmark);
  const Eigen::Index dim = family_dim(family);

  RunResult result;
  result.seed = seed;

  const SyntheticTask task = seed_test_task(config, seed);
  const MetaData meta = seed_meta_data(config, seed);
  const TrueMax best = true_maximum(task);
  result.true_max = best.value;

  Rng root(seed);
  Rng bo_rng = root.derive(kBoStream);
  Rng noise_rng = root.derive(kNoiseStream);
  Rng fit_rng = root.derive(kFitStream);

  std::unique_ptr<SurrogateModel> model = make_surrogate(config, dim, meta.data, fit_rng);

  ObjectiveFn objective = [&](const Eigen::VectorXd& x_unit) {
    const Eigen::VectorXd x_native = family_to_native(family, x_unit);
    const double f = synthetic_eval(task, x_native);
    const double z = config.noise_std > 0.0 ? noise_rng.normal() : 0.0;
    return Observation{-(f + config.noise_std * z), -f};
  };

  ContinuousBox box;
  box.lower = Eigen::VectorXd::Zero(dim);
  box.upper = Eigen::VectorXd::Ones(dim);
  Domain domain = box;

  AcquisitionConfig acq;
  acq.beta_sqrt = config.beta_sqrt;
  acq.continuous_restarts = config.continuous_restarts;
  acq.candidate_pool = config.candidate_pool;

  BOState state;
  state.test_data = DataSet::empty(dim);
  for (int it = 0; it < config.iterations; ++it) {
    state = bo_step(std::move(state), *model, objective, domain, acq, result.true_max, bo_rng,
                    config.record_timings);
    if (state.truncated) break;
  }

  result.trace = std::move(state.trace);
  for (auto& record : result.trace) record.x = family_to_native(family, record.x);
  return result;
}

RunResult run_tabular_seed(const ExperimentConfig& config, const TabularSet& set,
                           std::uint64_t seed) {
  RunResult result;
  result.seed = seed;

  Rng root(seed);
  Rng shuffle_rng = root.derive(kTaskStream);
  Rng subsample_rng = root.derive(kMetaStream);
  Rng bo_rng = root.derive(kBoStream);
  Rng fit_rng = root.derive(kFitStream);

  const int num_tables = static_cast<int>(set.tables.size());
  const std::vector<int> perm = shuffle_rng.sample_without_replacement(num_tables, num_tables);
  const TabularTask& test_table = set.tables[static_cast<std::size_t>(perm[0])];

  std::vector<DataSet> meta_data;
  if (config.method == "scaml") {
    std::vector<TabularTask> meta_tables;
    for (int m = 1; m <= config.meta_tasks; ++m) {
      meta_tables.push_back(set.tables[static_cast<std::size_t>(perm[static_cast<std::size_t>(m)])]);
    }
    meta_data = subsample_meta_tabular(meta_tables, config.points_per_task, subsample_rng);
  }

  const Eigen::Index dim = test_table.dim();
  result.true_max = test_table.values.maxCoeff();

  const Eigen::MatrixXd unit = test_table.unit_rows();
  std::map<std::vector<double>, Eigen::Index> row_of;
  for (Eigen::Index i = 0; i < unit.rows(); ++i) {
    std::vector<double> key(unit.row(i).begin(), unit.row(i).end());
    row_of.emplace(std::move(key), i);
  }

  ObjectiveFn objective = [&](const Eigen::VectorXd& x_unit) {
    std::vector<double> key(x_unit.begin(), x_unit.end());
    auto it = row_of.find(key);
    if (it == row_of.end()) throw std::logic_error("acquired point is not a table row");
    const double y = test_table.values(it->second);
    return Observation{y, y};  // table values are exact, no extra noise
  };

  std::unique_ptr<SurrogateModel> model = make_surrogate(config, dim, meta_data, fit_rng);

  Domain domain = DiscreteTable{unit};
  AcquisitionConfig acq;
  acq.beta_sqrt = config.beta_sqrt;
  acq.continuous_restarts = config.continuous_restarts;
  acq.candidate_pool = config.candidate_pool;

  BOState state;
  state.test_data = DataSet::empty(dim);
  for (int it = 0; it < config.iterations; ++it) {
    state = bo_step(std::move(state), *model, objective, domain, acq, result.true_max, bo_rng,
                    config.record_timings);
    if (state.truncated) break;
  }

  result.trace = std::move(state.trace);
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    result.trace[i].x = test_table.rows.row(state.visited[i]).transpose();
  }
  return result;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config is not valid json: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw ConfigError("config root must be a json object");

  ExperimentConfig config;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "benchmark") {
        config.benchmark = value.get<std::string>();
      } else if (key == "method") {
        config.method = value.get<std::string>();
      } else if (key == "meta_tasks") {
        config.meta_tasks = value.get<int>();
      } else if (key == "points_per_task") {
        config.points_per_task = value.get<int>();
      } else if (key == "iterations") {
        config.iterations = value.get<int>();
      } else if (key == "seeds") {
        if (value.is_string()) {
          config.seeds = parse_seeds(value.get<std::string>());
        } else if (value.is_number_integer()) {
          config.seeds = parse_seeds(std::to_string(value.get<std::int64_t>()));
        } else if (value.is_array()) {
          config.seeds.clear();
          for (const auto& item : value) config.seeds.push_back(item.get<std::uint64_t>());
        } else {
          throw ConfigError("seeds must be a count, a list, or a string");
        }
      } else if (key == "noise_std") {
        config.noise_std = value.get<double>();
      } else if (key == "beta_sqrt") {
        config.beta_sqrt = value.get<double>();
      } else if (key == "candidate_pool") {
        config.candidate_pool = value.get<int>();
      } else if (key == "continuous_restarts") {
        config.continuous_restarts = value.get<int>();
      } else if (key == "fit_restarts") {
        config.fit_restarts = value.get<int>();
      } else if (key == "output_path") {
        config.output_path = value.get<std::string>();
      } else if (key == "record_timings") {
        config.record_timings = value.get<bool>();
      } else if (key == "warm_start_weights") {
        config.warm_start_weights = value.get<bool>();
      } else if (key == "threads") {
        config.threads = value.get<int>();
      } else {
        throw ConfigError("unknown config key: " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad config value: " + std::string(e.what()));
  }
  config.validate();
  return config;
}

void ExperimentConfig::validate() const {
  if (method != "scaml" && method != "gpbo") {
    throw ConfigError("method must be scaml or gpbo, got '" + method + "'");
  }
  if (benchmark.empty()) throw ConfigError("benchmark must not be empty");
  if (is_tabular(benchmark) && benchmark.size() == std::string("tabular:").size()) {
    throw ConfigError("tabular benchmark needs a path: tabular:<path>");
  }
  if (!is_tabular(benchmark)) {
    try {
      family_from_name(benchmark);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (meta_tasks < 0) throw ConfigError("meta_tasks must be >= 0");
  if (points_per_task < 1) throw ConfigError("points_per_task must be >= 1");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (!(noise_std >= 0.0)) throw ConfigError("noise_std must be >= 0");
  if (!(beta_sqrt > 0.0)) throw ConfigError("beta_sqrt must be > 0");
  if (candidate_pool < 1) throw ConfigError("candidate_pool must be >= 1");
  if (continuous_restarts < 1) throw ConfigError("continuous_restarts must be >= 1");
  if (fit_restarts < 1) throw ConfigError("fit_restarts must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (output_path.empty()) throw ConfigError("output_path must not be empty");
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::string trimmed;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) trimmed.push_back(c);
  }
  if (trimmed.empty()) throw ConfigError("empty seeds specification");

  std::vector<std::uint64_t> seeds;
  if (trimmed.find(',') != std::string::npos) {
    std::stringstream ss(trimmed);
    std::string token;
    while (std::getline(ss, token, ',')) seeds.push_back(parse_u64(token));
    if (trimmed.back() == ',') throw ConfigError("trailing comma in seeds specification");
  } else {
    const std::uint64_t count = parse_u64(trimmed);
    if (count == 0) throw ConfigError("seed count must be >= 1");
    for (std::uint64_t s = 1; s <= count; ++s) seeds.push_back(s);
  }
  return seeds;
}

SyntheticTask seed_test_task(const ExperimentConfig& config, std::uint64_t seed) {
  const Family family = family_from_name(config.benchmark);
  Rng task_rng = Rng(seed).derive(kTaskStream);
  return sample_task(family, task_rng);
}

MetaData seed_meta_data(const ExperimentConfig& config, std::uint64_t seed) {
  const Family family = family_from_name(config.benchmark);
  MetaDataSpec spec;
  spec.num_tasks = config.meta_tasks;
  spec.points_per_task = config.points_per_task;
  spec.noise_std = config.noise_std;
  spec.seed = Rng(seed).derive(kMetaStream).seed();
  return generate_meta_data(family, spec);
}

std::vector<RunResult> run_experiment(const ExperimentConfig& config) {
  config.validate();

  TabularSet tabular_set;
  const bool tabular = is_tabular(config.benchmark);
  if (tabular) {
    tabular_set = load_tabular_set(config.benchmark);
    const int need = config.method == "scaml" ? config.meta_tasks + 1 : 1;
    if (static_cast<int>(tabular_set.tables.size()) < need) {
      throw ConfigError("tabular benchmark needs at least " + std::to_string(need) +
                        " tables, found " + std::to_string(tabular_set.tables.size()));
    }
    if (config.noise_std > 0.0) {
      std::cerr << "note: tabular objectives are exact, noise_std is ignored\n";
    }
  }

  const std::size_t num_seeds = config.seeds.size();
  std::vector<RunResult> results(num_seeds);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= num_seeds) return;
      const std::uint64_t seed = config.seeds[i];
      try {
        results[i] = tabular ? run_tabular_seed(config, tabular_set, seed)
                             : run_synthetic_seed(config, seed);
      } catch (const std::exception& e) {
        results[i] = RunResult{};
        results[i].seed = seed;
        results[i].failed = true;
        results[i].error = e.what();
      }
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const std::size_t num_threads =
      config.threads > 0 ? static_cast<std::size_t>(config.threads)
                         : std::min<std::size_t>(hw, num_seeds);
  if (num_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(num_threads);
    for (std::size_t t = 0; t < num_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return results;
}

std::string summary_path_for(const std::string& results_path) {
  const std::string suffix = ".csv";
  if (results_path.size() >= suffix.size() &&
      results_path.compare(results_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return results_path.substr(0, results_path.size() - suffix.size()) + "_summary.csv";
  }
  return results_path + "_summary.csv";
}

void write_results_csv(const std::vector<RunResult>& results, const std::string& path) {
  std::size_t successes = 0;
  for (const auto& r : results) {
    if (!r.failed) ++successes;
  }
  if (successes == 0) throw std::invalid_argument("no successful runs to write");

  std::ofstream out(path);
  if (!out) throw IoError("cannot open results file for writing: " + path);
  out << "seed,iteration,x,y_noisy,f_noiseless,simple_regret,cumulative_regret,fit_ms,acq_ms\n";
  for (const auto& r : results) {
    if (r.failed) continue;
    for (const auto& t : r.trace) {
      out << r.seed << ',' << t.iteration << ',';
      for (Eigen::Index j = 0; j < t.x.size(); ++j) {
        if (j > 0) out << ';';
        out << format_double(t.x(j));
      }
      out << ',' << format_double(t.y_noisy) << ',' << format_double(t.f_noiseless) << ','
          << format_double(t.simple_regret) << ',' << format_double(t.cumulative_regret) << ','
          << format_double(t.fit_ms) << ',' << format_double(t.acq_ms) << '\n';
    }
  }
  if (!out) throw IoError("failed writing results file: " + path);

  std::size_t max_iterations = 0;
  for (const auto& r : results) {
    if (!r.failed) max_iterations = std::max(max_iterations, r.trace.size());
  }

  std::ofstream sum(summary_path_for(path));
  if (!sum) throw IoError("cannot open summary file for writing: " + summary_path_for(path));
  sum << "iteration,mean_simple_regret,stderr_simple_regret,mean_cumulative_regret,"
         "stderr_cumulative_regret,num_seeds\n";
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::vector<double> simple;
    std::vector<double> cumulative;
    for (const auto& r : results) {
      if (r.failed || it >= r.trace.size()) continue;
      simple.push_back(r.trace[it].simple_regret);
      cumulative.push_back(r.trace[it].cumulative_regret);
    }
    auto mean_of = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    auto stderr_of = [&](const std::vector<double>& v, double mean) {
      if (v.size() < 2) return 0.0;
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      const double var = ss / static_cast<double>(v.size() - 1);
      return std::sqrt(var / static_cast<double>(v.size()));
    };
    const double ms = mean_of(simple);
    const double mc = mean_of(cumulative);
    sum << (it + 1) << ',' << format_double(ms) << ',' << format_double(stderr_of(simple, ms))
        << ',' << format_double(mc) << ',' << format_double(stderr_of(cumulative, mc)) << ','
        << simple.size() << '\n';
  }
  if (!sum) throw IoError("failed writing summary file: " + summary_path_for(path));
}

int run_and_write(const ExperimentConfig& config) {
  const std::vector<RunResult> results = run_experiment(config);
  int failed = 0;
  for (const auto& r : results) {
    if (r.failed) {
      ++failed;
      std::cerr << "seed " << r.seed << " failed: " << r.error << '\n';
    }
  }
  write_results_csv(results, config.output_path);
  return failed;
}

}  // namespace scamlgp
