#include "scamlgp/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <sstream>

#include "scamlgp/errors.hpp"
#include "scamlgp/linalg.hpp"
#include "scamlgp/scaml.hpp"

namespace scamlgp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_line(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

// One random multi-task setup with fixed (not fitted) hyperparameters.
struct Instance {
  MetaModel model;
  std::vector<DataSet> meta_data;
  DataSet test_data;
  Eigen::MatrixXd query;
};

Eigen::MatrixXd uniform_inputs(Rng& rng, Eigen::Index n, Eigen::Index d) {
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.uniform();
  }
  return X;
}

Eigen::VectorXd normal_outputs(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = rng.normal();
  return y;
}

KernelParams random_kernel(Rng& rng, Eigen::Index d) {
  KernelParams k;
  k.lengthscales.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) k.lengthscales(j) = rng.uniform(0.2, 1.5);
  k.outputscale = rng.uniform(0.5, 2.0);
  return k;
}

Instance make_instance(Rng& rng, int k, int num_test) {
  const Eigen::Index d = 1 + k % 3;
  const int num_meta = 1 + k % 4;
  const Eigen::Index num_query = 1 + k % 6;

  Instance inst;
  inst.model.weights.values.resize(num_meta);
  for (int m = 0; m < num_meta; ++m) {
    const Eigen::Index n = 2 + rng.uniform_int(7);  // 2..8 points
    DataSet data(uniform_inputs(rng, n, d), normal_outputs(rng, n));
    NoiseParams noise{rng.uniform(1e-4, 1e-2)};
    inst.model.meta_gps.push_back(condition_gp(data, random_kernel(rng, d), noise));
    inst.meta_data.push_back(std::move(data));
    inst.model.weights.values(m) = rng.uniform(0.1, 2.0);
  }
  inst.model.test_kernel = random_kernel(rng, d);
  inst.model.test_noise = NoiseParams{rng.uniform(1e-4, 1e-2)};
  inst.test_data = num_test > 0
                       ? DataSet(uniform_inputs(rng, num_test, d), normal_outputs(rng, num_test))
                       : DataSet::empty(d);
  inst.query = uniform_inputs(rng, num_query, d);
  return inst;
}

std::string describe_instance(int k, const Instance& inst) {
  return format_line("config k=%d: d=%d M=%d N_t=%d Q=%d (rerun: verify rng, index %d)", k,
                     static_cast<int>(inst.model.dim()), inst.model.num_meta(),
                     static_cast<int>(inst.test_data.size()), static_cast<int>(inst.query.rows()),
                     k);
}

CheckReport check_theorem1() {
  const auto start = Clock::now();
  CheckReport report;
  report.name = "theorem1";
  report.threshold = 1.0;  // violation ratio against 1e-10 + 1e-8 * reference

  Rng rng(20240816);
  double worst = 0.0;
  double worst_mean_abs = 0.0;
  double worst_cov_abs = 0.0;
  std::string first_failure;
  for (int k = 0; k < 20; ++k) {
    Instance inst = make_instance(rng, k, k % 6);
    const PosteriorCache cache = build_posterior_cache(inst.model, inst.test_data.inputs);
    const TestTaskParams params{inst.model.test_kernel, inst.model.test_noise,
                                inst.model.weights};
    const Posterior modular =
        test_posterior(inst.model, cache, params, inst.test_data, inst.query);
    const OraclePosterior oracle =
        joint_mtgp_oracle(inst.meta_data, inst.test_data, inst.model, inst.query);

    double mean_ratio = 0.0;
    for (Eigen::Index i = 0; i < modular.mean.size(); ++i) {
      const double err = std::abs(modular.mean(i) - oracle.mean(i));
      mean_ratio = std::max(mean_ratio, err / (1e-10 + 1e-8 * std::abs(oracle.mean(i))));
      worst_mean_abs = std::max(worst_mean_abs, err);
    }
    const double cov_err = (modular.cov - oracle.cov).norm();
    const double cov_ratio = cov_err / (1e-10 + 1e-8 * oracle.cov.norm());
    worst_cov_abs = std::max(worst_cov_abs, cov_err);

    const double ratio = std::max(mean_ratio, cov_ratio);
    worst = std::max(worst, ratio);
    if (ratio > 1.0 && first_failure.empty()) first_failure = describe_instance(k, inst);
  }
  report.observed = worst;
  report.passed = worst <= report.threshold;
  report.details = format_line("max |mean diff| %.3e, max ||cov diff||_F %.3e over 20 configs",
                               worst_mean_abs, worst_cov_abs);
  if (!first_failure.empty()) report.details += "\n  first failure at " + first_failure;
  report.elapsed_seconds = seconds_since(start);
  return report;
}

CheckReport check_eq9() {
  const auto start = Clock::now();
  CheckReport report;
  report.name = "eq9";
  report.threshold = 1e-8;

  Rng rng(20240816);
  double worst = 0.0;
  std::string first_failure;
  for (int k = 0; k < 20; ++k) {
    Instance inst = make_instance(rng, k, 1 + k % 5);
    const PosteriorCache cache = build_posterior_cache(inst.model, inst.test_data.inputs);
    const TestTaskParams params{inst.model.test_kernel, inst.model.test_noise,
                                inst.model.weights};

    const double test_ll = test_task_log_likelihood(params, inst.model, cache, inst.test_data);
    double meta_ll = 0.0;
    for (int m = 0; m < inst.model.num_meta(); ++m) {
      const FittedGP& gp = inst.model.meta_gps[static_cast<std::size_t>(m)];
      meta_ll += log_marginal_likelihood(gp.kernel, gp.noise, inst.meta_data[static_cast<std::size_t>(m)]);
    }
    const Eigen::MatrixXd no_query(0, inst.model.dim());
    const OraclePosterior oracle =
        joint_mtgp_oracle(inst.meta_data, inst.test_data, inst.model, no_query);

    const double diff = std::abs(oracle.joint_log_lik - (test_ll + meta_ll));
    worst = std::max(worst, diff);
    if (diff > report.threshold && first_failure.empty()) {
      first_failure = describe_instance(k, inst);
    }
  }
  report.observed = worst;
  report.passed = worst <= report.threshold;
  report.details = format_line("max |joint - (test + sum meta)| %.3e over 20 configs", worst);
  if (!first_failure.empty()) report.details += "\n  first failure at " + first_failure;
  report.elapsed_seconds = seconds_since(start);
  return report;
}

CheckReport check_psd() {
  const auto start = Clock::now();
  CheckReport report;
  report.name = "psd";
  report.threshold = -1e-8;  // min eigenvalue must stay above this

  Rng rng(7);
  double min_eig = std::numeric_limits<double>::infinity();
  std::string first_failure;

  for (int i = 0; i < 200; ++i) {
    const int num_meta = 1 + rng.uniform_int(6);
    const int task = 1 + rng.uniform_int(num_meta + 1);
    const double w = rng.uniform(-3.0, 3.0);
    const double e = min_eigenvalue(coreg_matrix(task, w, num_meta));
    if (e < min_eig) min_eig = e;
    if (e < report.threshold && first_failure.empty()) {
      first_failure = format_line("coreg draw %d: task=%d w=%.6f M=%d", i, task, w, num_meta);
    }
  }

  for (int j = 0; j < 50; ++j) {
    const Eigen::Index d = 1 + rng.uniform_int(3);
    const int num_meta = rng.uniform_int(4);  // 0..3 meta tasks

    MetaModel model;
    model.weights.values.resize(num_meta);
    std::vector<Eigen::MatrixXd> task_inputs;
    std::vector<int> task_ids;
    for (int m = 0; m < num_meta; ++m) {
      model.meta_gps.push_back(
          condition_gp(DataSet::empty(d), random_kernel(rng, d), NoiseParams{1e-6}));
      model.weights.values(m) = rng.uniform(-3.0, 3.0);
    }
    model.test_kernel = random_kernel(rng, d);
    model.test_noise = NoiseParams{1e-6};

    Eigen::Index total = 0;
    for (int t = 1; t <= num_meta + 1; ++t) {
      const Eigen::Index n = 1 + rng.uniform_int(5);
      task_inputs.push_back(uniform_inputs(rng, n, d));
      task_ids.push_back(t);
      total += n;
    }

    Eigen::MatrixXd gram(total, total);
    Eigen::Index row = 0;
    for (std::size_t a = 0; a < task_inputs.size(); ++a) {
      for (Eigen::Index ia = 0; ia < task_inputs[a].rows(); ++ia, ++row) {
        Eigen::Index col = 0;
        for (std::size_t b = 0; b < task_inputs.size(); ++b) {
          for (Eigen::Index ib = 0; ib < task_inputs[b].rows(); ++ib, ++col) {
            gram(row, col) =
                joint_kernel(task_inputs[a].row(ia).transpose(), task_ids[a],
                             task_inputs[b].row(ib).transpose(), task_ids[b], model);
          }
        }
      }
    }
    const double e = min_eigenvalue(gram);
    if (e < min_eig) min_eig = e;
    if (e < report.threshold && first_failure.empty()) {
      first_failure = format_line("joint gram draw %d: d=%d M=%d n=%d", j, static_cast<int>(d),
                                  num_meta, static_cast<int>(total));
    }
  }

  report.observed = min_eig;
  report.passed = min_eig >= report.threshold;
  report.details =
      format_line("min eigenvalue %.3e over 200 coreg + 50 joint gram draws", min_eig);
  if (!first_failure.empty()) report.details += "\n  first failure at " + first_failure;
  report.elapsed_seconds = seconds_since(start);
  return report;
}

CheckReport check_gradients() {
  const auto start = Clock::now();
  CheckReport report;
  report.name = "gradients";
  report.threshold = 1e-5;

  Rng rng(11);
  double worst = 0.0;
  std::string first_failure;
  const double h = 1e-5;
  for (int k = 0; k < 20; ++k) {
    const Eigen::Index d = 1 + k % 3;
    const Eigen::Index n = 2 + rng.uniform_int(7);
    DataSet data(uniform_inputs(rng, n, d), normal_outputs(rng, n));

    KernelParams kernel;
    kernel.lengthscales.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) kernel.lengthscales(j) = rng.uniform(0.3, 1.2);
    kernel.outputscale = rng.uniform(0.5, 2.0);
    NoiseParams noise{rng.uniform(1e-3, 1e-2)};

    const Eigen::VectorXd analytic = lml_gradient(kernel, noise, data);

    Eigen::VectorXd log_theta(d + 2);
    for (Eigen::Index j = 0; j < d; ++j) log_theta(j) = std::log(kernel.lengthscales(j));
    log_theta(d) = std::log(kernel.outputscale);
    log_theta(d + 1) = std::log(noise.noise_variance);

    auto eval = [&](const Eigen::VectorXd& lt) {
      KernelParams kp;
      kp.lengthscales = lt.head(d).array().exp();
      kp.outputscale = std::exp(lt(d));
      NoiseParams np{std::exp(lt(d + 1))};
      return log_marginal_likelihood(kp, np, data);
    };

    Eigen::VectorXd fd(d + 2);
    for (Eigen::Index j = 0; j < d + 2; ++j) {
      Eigen::VectorXd up = log_theta, down = log_theta;
      up(j) += h;
      down(j) -= h;
      fd(j) = (eval(up) - eval(down)) / (2.0 * h);
    }

    const double err = (analytic - fd).norm() / std::max(fd.norm(), 1e-6);
    worst = std::max(worst, err);
    if (err > report.threshold && first_failure.empty()) {
      first_failure = format_line("gradient config k=%d: d=%d N=%d", k, static_cast<int>(d),
                                  static_cast<int>(n));
    }
  }
  report.observed = worst;
  report.passed = worst <= report.threshold;
  report.details = format_line("max relative gradient error %.3e over 20 instances", worst);
  if (!first_failure.empty()) report.details += "\n  first failure at " + first_failure;
  report.elapsed_seconds = seconds_since(start);
  return report;
}

CheckReport check_scaling() {
  const auto start = Clock::now();
  CheckReport report;
  report.name = "scaling";
  report.threshold = 12.0;  // linear in M predicts 8x from M=4 to M=32

  const Eigen::Index d = 2;
  Rng rng(13);

  std::vector<FittedGP> meta_gps;
  for (int m = 0; m < 32; ++m) {
    DataSet data(uniform_inputs(rng, 32, d), normal_outputs(rng, 32));
    meta_gps.push_back(condition_gp(std::move(data), random_kernel(rng, d), NoiseParams{1e-4}));
  }
  const DataSet test_data(uniform_inputs(rng, 16, d), normal_outputs(rng, 16));

  const std::vector<int> sweep = {4, 8, 16, 32};
  std::vector<double> mean_seconds;
  double checksum = 0.0;
  std::ostringstream table;
  for (int num_meta : sweep) {
    MetaModel model;
    model.meta_gps.assign(meta_gps.begin(), meta_gps.begin() + num_meta);
    model.weights.values = Eigen::VectorXd::Constant(num_meta, 1.0);
    model.test_kernel = random_kernel(rng, d);
    model.test_noise = NoiseParams{1e-4};
    const PosteriorCache cache = build_posterior_cache(model, test_data.inputs);
    const TestTaskParams params{model.test_kernel, model.test_noise, model.weights};

    for (int warm = 0; warm < 3; ++warm) {
      checksum += test_task_log_likelihood(params, model, cache, test_data);
    }

    int reps = 64;
    double elapsed = 0.0;
    for (;;) {
      const auto t0 = Clock::now();
      for (int r = 0; r < reps; ++r) {
        checksum += test_task_log_likelihood(params, model, cache, test_data);
      }
      elapsed = seconds_since(t0);
      if (elapsed >= 0.2 || reps >= 65536) break;
      reps *= 4;
    }
    const double mean = elapsed / reps;
    mean_seconds.push_back(mean);
    table << format_line("  M=%-2d  mean eval %.3f us  (%d reps)\n", num_meta, mean * 1e6, reps);
  }

  const double ratio = mean_seconds.back() / mean_seconds.front();
  report.observed = ratio;
  report.passed = ratio <= report.threshold;
  report.details = format_line("t(M=32)/t(M=4) = %.2f (checksum %.6g)\n", ratio, checksum) +
                   table.str();
  while (!report.details.empty() && report.details.back() == '\n') report.details.pop_back();
  report.elapsed_seconds = seconds_since(start);
  return report;
}

}  // namespace

std::vector<CheckReport> run_verify(const std::string& which) {
  std::vector<CheckReport> reports;
  const bool all = which == "all";
  if (all || which == "theorem1") reports.push_back(check_theorem1());
  if (all || which == "eq9") reports.push_back(check_eq9());
  if (all || which == "psd") reports.push_back(check_psd());
  if (all || which == "gradients") reports.push_back(check_gradients());
  if (all || which == "scaling") reports.push_back(check_scaling());
  if (reports.empty()) {
    throw ConfigError("unknown verify suite '" + which +
                      "' (expected theorem1, eq9, psd, gradients, scaling, or all)");
  }
  return reports;
}

}  // namespace scamlgp
