#include "scamlgp/scaml.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "scamlgp/errors.hpp"
#include "scamlgp/optim.hpp"

namespace scamlgp {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

void validate_weights(const MetaModel& model, const TaskWeights& weights, const char* who) {
  if (weights.size() != model.num_meta()) {
    throw std::invalid_argument(std::string(who) + ": got " + std::to_string(weights.size()) +
                                " weights for " + std::to_string(model.num_meta()) +
                                " meta tasks");
  }
}

// Test prior with explicit kernel/weights, meta posteriors computed fresh.
Posterior prior_at(const MetaModel& model, const KernelParams& kernel, const TaskWeights& weights,
                   const Eigen::MatrixXd& X) {
  Posterior prior;
  prior.mean = Eigen::VectorXd::Zero(X.rows());
  prior.cov = kernel_matrix(X, kernel);
  for (int m = 0; m < model.num_meta(); ++m) {
    const double w = weights.values[m];
    const Posterior post = gp_posterior(model.meta_gps[static_cast<std::size_t>(m)], X);
    prior.mean += w * post.mean;
    prior.cov += (w * w) * post.cov;
  }
  return prior;
}

// Likelihood of the test observations given cached meta posteriors; fills
// *grad w.r.t. [log l_1..d, log s, log sigma2, log w_1..M] when requested.
double test_ll_impl(const TestTaskParams& params, const MetaModel& model,
                    const PosteriorCache& cache, const DataSet& test_data,
                    Eigen::VectorXd* grad) {
  const Eigen::Index n = test_data.size();
  const Eigen::Index d = test_data.dim();
  if (n < 1) {
    throw std::invalid_argument("test_task_log_likelihood: need at least one test observation");
  }
  if (params.kernel.dim() != d) {
    throw std::invalid_argument("test_task_log_likelihood: kernel/input dimension mismatch");
  }
  validate_weights(model, params.weights, "test_task_log_likelihood");
  if (!cache.matches(test_data.inputs)) {
    throw StaleCacheError("test_task_log_likelihood: cache was built for different inputs");
  }
  const int num_meta = model.num_meta();

  Eigen::VectorXd prior_mean = Eigen::VectorXd::Zero(n);
  const Eigen::MatrixXd k_test = kernel_matrix(test_data.inputs, params.kernel);
  Eigen::MatrixXd k = k_test;
  for (int m = 0; m < num_meta; ++m) {
    const double w = params.weights.values[m];
    prior_mean += w * cache.means[static_cast<std::size_t>(m)];
    k += (w * w) * cache.covs[static_cast<std::size_t>(m)];
  }
  k.diagonal().array() += params.noise.noise_variance;

  const CholeskyResult chol = cholesky_with_jitter(k);
  const Eigen::VectorXd residual = test_data.outputs - prior_mean;
  const Eigen::VectorXd alpha = chol_solve(chol.factor, residual);
  const double value = -0.5 * residual.dot(alpha) - 0.5 * chol_log_det(chol.factor) -
                       0.5 * static_cast<double>(n) * kLogTwoPi;

  if (grad != nullptr) {
    const Eigen::MatrixXd k_inv =
        chol_solve(chol.factor, Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n)));
    const Eigen::MatrixXd a = alpha * alpha.transpose() - k_inv;
    grad->resize(d + 2 + num_meta);
    for (Eigen::Index i = 0; i < d; ++i) {
      const Eigen::VectorXd col = test_data.inputs.col(i) / params.kernel.lengthscales[i];
      const Eigen::MatrixXd dsq = (col.replicate(1, n) - col.transpose().replicate(n, 1))
                                      .array()
                                      .square()
                                      .matrix();
      (*grad)[i] = 0.5 * (a.array() * k_test.array() * dsq.array()).sum();
    }
    (*grad)[d] = 0.5 * (a.array() * k_test.array()).sum();
    (*grad)[d + 1] = 0.5 * params.noise.noise_variance * a.trace();
    for (int m = 0; m < num_meta; ++m) {
      const double w = params.weights.values[m];
      const Eigen::VectorXd& mu = cache.means[static_cast<std::size_t>(m)];
      const Eigen::MatrixXd& sigma = cache.covs[static_cast<std::size_t>(m)];
      const double trace_term =
          alpha.dot(sigma * alpha) - (k_inv.array() * sigma.array()).sum();
      (*grad)[d + 2 + m] = w * mu.dot(alpha) + (w * w) * trace_term;
    }
  }
  return value;
}

}  // namespace

bool PosteriorCache::matches(const Eigen::MatrixXd& X) const {
  if (X.rows() != inputs.rows() || X.cols() != inputs.cols()) return false;
  if (key != hash_matrix(X)) return false;
  return X == inputs;
}

PosteriorCache build_posterior_cache(const MetaModel& model, const Eigen::MatrixXd& X) {
  PosteriorCache cache;
  cache.inputs = X;
  cache.key = hash_matrix(X);
  cache.means.reserve(model.meta_gps.size());
  cache.covs.reserve(model.meta_gps.size());
  for (const FittedGP& gp : model.meta_gps) {
    Posterior post = gp_posterior(gp, X);
    cache.means.push_back(std::move(post.mean));
    cache.covs.push_back(std::move(post.cov));
  }
  return cache;
}

Eigen::MatrixXd coreg_matrix(int task, double weight, int num_meta) {
  if (num_meta < 0) throw std::invalid_argument("coreg_matrix: num_meta must be nonnegative");
  if (task < 1 || task > num_meta + 1) {
    throw std::invalid_argument("coreg_matrix: task index " + std::to_string(task) +
                                " outside {1.." + std::to_string(num_meta + 1) + "}");
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(num_meta + 1, num_meta + 1);
  const int test = num_meta;  // 0-based row of the test task
  if (task == num_meta + 1) {
    w(test, test) = 1.0;
    return w;
  }
  const int m = task - 1;
  w(m, m) = 1.0;
  w(m, test) = weight;
  w(test, m) = weight;
  w(test, test) = weight * weight;
  return w;
}

double joint_kernel(const Eigen::VectorXd& x, int task, const Eigen::VectorXd& x2, int task2,
                    const MetaModel& model) {
  const int num_meta = model.num_meta();
  const int test = num_meta + 1;
  auto check_task = [&](int t) {
    if (t < 1 || t > test) {
      throw std::invalid_argument("joint_kernel: task index " + std::to_string(t) +
                                  " outside {1.." + std::to_string(test) + "}");
    }
  };
  check_task(task);
  check_task(task2);
  validate_weights(model, model.weights, "joint_kernel");

  if (task != test && task2 != test) {
    if (task != task2) return 0.0;  // distinct meta tasks are independent a priori
    return se_ard(x, x2, model.meta_gps[static_cast<std::size_t>(task - 1)].kernel);
  }
  if (task == test && task2 == test) {
    double value = se_ard(x, x2, model.test_kernel);
    for (int m = 0; m < num_meta; ++m) {
      const double w = model.weights.values[m];
      value += w * w * se_ard(x, x2, model.meta_gps[static_cast<std::size_t>(m)].kernel);
    }
    return value;
  }
  const int meta = (task == test) ? task2 : task;
  const double w = model.weights.values[meta - 1];
  return w * se_ard(x, x2, model.meta_gps[static_cast<std::size_t>(meta - 1)].kernel);
}

Rng meta_task_rng(const Rng& base, const DataSet& data) {
  const std::uint64_t id = hash_matrix(data.inputs, hash_vector(data.outputs));
  return base.derive(id);
}

std::vector<FittedGP> fit_meta_tasks(const std::vector<DataSet>& meta_data,
                                     const GpHyperPriors& priors, int restarts, const Rng& rng) {
  std::vector<FittedGP> gps;
  gps.reserve(meta_data.size());
  for (std::size_t m = 0; m < meta_data.size(); ++m) {
    const DataSet& data = meta_data[m];
    if (data.size() < 1) {
      throw std::invalid_argument("fit_meta_tasks: meta task " + std::to_string(m) +
                                  " has no observations");
    }
    if (m > 0 && data.dim() != meta_data[0].dim()) {
      throw std::invalid_argument("fit_meta_tasks: meta task " + std::to_string(m) +
                                  " has mismatched input dimension");
    }
    Rng task_rng = meta_task_rng(rng, data);
    try {
      gps.push_back(fit_map(data, priors, {}, restarts, task_rng));
    } catch (const FitError& err) {
      throw FitError("fit_meta_tasks: meta task " + std::to_string(m) + ": " + err.what());
    }
  }
  return gps;
}

Posterior test_prior(const MetaModel& model, const PosteriorCache* cache,
                     const Eigen::MatrixXd& X) {
  validate_weights(model, model.weights, "test_prior");
  if (X.cols() != model.dim()) {
    throw std::invalid_argument("test_prior: query dimension mismatch");
  }
  if (cache == nullptr) {
    return prior_at(model, model.test_kernel, model.weights, X);
  }
  if (!cache->matches(X)) {
    throw StaleCacheError("test_prior: cache was built for different inputs");
  }
  Posterior prior;
  prior.mean = Eigen::VectorXd::Zero(X.rows());
  prior.cov = kernel_matrix(X, model.test_kernel);
  for (int m = 0; m < model.num_meta(); ++m) {
    const double w = model.weights.values[m];
    prior.mean += w * cache->means[static_cast<std::size_t>(m)];
    prior.cov += (w * w) * cache->covs[static_cast<std::size_t>(m)];
  }
  return prior;
}

double test_task_log_likelihood(const TestTaskParams& params, const MetaModel& model,
                                const PosteriorCache& cache, const DataSet& test_data) {
  return test_ll_impl(params, model, cache, test_data, nullptr);
}

TestTaskParams fit_test_hypers(const MetaModel& model, const PosteriorCache& cache,
                               const DataSet& test_data, const TestTaskPriors& priors,
                               int restarts, Rng& rng, const TestTaskParams* warm_start) {
  if (restarts < 1) throw std::invalid_argument("fit_test_hypers: restarts must be >= 1");
  const int num_meta = model.num_meta();
  const Eigen::Index d = model.dim();
  if (d == 0) throw std::invalid_argument("fit_test_hypers: model has no input dimension");

  if (test_data.size() == 0) {
    // Bootstrap: no evidence yet, keep every meta task at unit weight.
    TestTaskParams params;
    params.kernel.lengthscales =
        Eigen::VectorXd::Constant(d, priors.gp.lengthscale.median_clipped());
    params.kernel.outputscale = priors.gp.outputscale.median_clipped();
    params.noise.noise_variance = priors.gp.noise.median_clipped();
    params.weights.values = Eigen::VectorXd::Ones(num_meta);
    return params;
  }
  if (test_data.dim() != d) {
    throw std::invalid_argument("fit_test_hypers: data/model dimension mismatch");
  }
  if (!cache.matches(test_data.inputs)) {
    throw StaleCacheError("fit_test_hypers: cache was built for different inputs");
  }

  const Eigen::Index nparams = d + 2 + num_meta;
  Eigen::VectorXd lo(nparams), hi(nparams);
  for (Eigen::Index i = 0; i < d; ++i) {
    lo[i] = std::log(priors.gp.lengthscale.lower);
    hi[i] = std::log(priors.gp.lengthscale.upper);
  }
  lo[d] = std::log(priors.gp.outputscale.lower);
  hi[d] = std::log(priors.gp.outputscale.upper);
  lo[d + 1] = std::log(priors.gp.noise.lower);
  hi[d + 1] = std::log(priors.gp.noise.upper);
  for (int m = 0; m < num_meta; ++m) {
    lo[d + 2 + m] = std::log(priors.weight.lower);
    hi[d + 2 + m] = std::log(priors.weight.upper);
  }

  auto unpack = [d, num_meta](const Eigen::VectorXd& u) {
    TestTaskParams params;
    params.kernel.lengthscales = u.head(d).array().exp();
    params.kernel.outputscale = std::exp(u[d]);
    params.noise.noise_variance = std::exp(u[d + 1]);
    params.weights.values = u.tail(num_meta).array().exp();
    return params;
  };

  ObjectiveGrad objective = [&](const Eigen::VectorXd& u, Eigen::VectorXd& grad) {
    const TestTaskParams params = unpack(u);
    Eigen::VectorXd ll_grad;
    double value = test_ll_impl(params, model, cache, test_data, &ll_grad);
    for (Eigen::Index i = 0; i < d; ++i) {
      value += priors.gp.lengthscale.dist.log_pdf(params.kernel.lengthscales[i]);
      ll_grad[i] += priors.gp.lengthscale.dist.dlogpdf_dlogx(params.kernel.lengthscales[i]);
    }
    value += priors.gp.outputscale.dist.log_pdf(params.kernel.outputscale);
    ll_grad[d] += priors.gp.outputscale.dist.dlogpdf_dlogx(params.kernel.outputscale);
    value += priors.gp.noise.dist.log_pdf(params.noise.noise_variance);
    ll_grad[d + 1] += priors.gp.noise.dist.dlogpdf_dlogx(params.noise.noise_variance);
    for (int m = 0; m < num_meta; ++m) {
      const double w = params.weights.values[m];
      value += priors.weight.dist.log_pdf(w);
      ll_grad[d + 2 + m] += priors.weight.dist.dlogpdf_dlogx(w);
    }
    grad = -ll_grad;
    return -value;
  };

  auto clip_log = [&](double v, Eigen::Index idx) {
    return std::min(hi[idx], std::max(lo[idx], std::log(v)));
  };

  std::vector<Eigen::VectorXd> starts;
  if (warm_start != nullptr) {
    if (warm_start->kernel.dim() == d && warm_start->weights.size() == num_meta) {
      Eigen::VectorXd u0(nparams);
      for (Eigen::Index i = 0; i < d; ++i) {
        u0[i] = clip_log(warm_start->kernel.lengthscales[i], i);
      }
      u0[d] = clip_log(warm_start->kernel.outputscale, d);
      u0[d + 1] = clip_log(warm_start->noise.noise_variance, d + 1);
      for (int m = 0; m < num_meta; ++m) {
        u0[d + 2 + m] = clip_log(warm_start->weights.values[m], d + 2 + m);
      }
      starts.push_back(std::move(u0));
    }
  }
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd u0(nparams);
    for (Eigen::Index i = 0; i < d; ++i) {
      u0[i] = std::log(priors.gp.lengthscale.sample_clipped(rng));
    }
    u0[d] = std::log(priors.gp.outputscale.sample_clipped(rng));
    u0[d + 1] = std::log(priors.gp.noise.sample_clipped(rng));
    for (int m = 0; m < num_meta; ++m) {
      u0[d + 2 + m] = std::log(priors.weight.sample_clipped(rng));
    }
    starts.push_back(std::move(u0));
  }

  bool have_best = false;
  double best_value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_u;
  std::string first_failure;
  for (const Eigen::VectorXd& u0 : starts) {
    try {
      const LbfgsResult res = minimize_box_lbfgs(objective, u0, lo, hi);
      if (res.value < best_value) {
        best_value = res.value;
        best_u = res.x;
        have_best = true;
      }
    } catch (const std::runtime_error& err) {
      if (first_failure.empty()) first_failure = err.what();
    }
  }
  if (!have_best) {
    throw FitError("fit_test_hypers: all restarts failed; first failure: " + first_failure);
  }
  return unpack(best_u);
}

Posterior test_posterior(const MetaModel& model, const PosteriorCache& cache,
                         const TestTaskParams& params, const DataSet& test_data,
                         const Eigen::MatrixXd& Xq) {
  validate_weights(model, params.weights, "test_posterior");
  if (Xq.cols() != model.dim()) {
    throw std::invalid_argument("test_posterior: query dimension mismatch");
  }
  if (!cache.matches(test_data.inputs)) {
    throw StaleCacheError("test_posterior: cache was built for different inputs");
  }
  const Eigen::Index n = test_data.size();
  const Eigen::Index q = Xq.rows();

  if (n == 0) {
    return prior_at(model, params.kernel, params.weights, Xq);
  }

  // Joint prior over [X_t; Xq], then Gaussian conditioning on y_t.
  Eigen::MatrixXd stacked(n + q, Xq.cols());
  stacked.topRows(n) = test_data.inputs;
  stacked.bottomRows(q) = Xq;
  const Posterior prior = prior_at(model, params.kernel, params.weights, stacked);

  Eigen::MatrixXd k_tt = prior.cov.topLeftCorner(n, n);
  k_tt.diagonal().array() += params.noise.noise_variance;
  const Eigen::MatrixXd k_tq = prior.cov.topRightCorner(n, q);

  const CholeskyResult chol = cholesky_with_jitter(k_tt);
  const Eigen::VectorXd alpha = chol_solve(chol.factor, Eigen::VectorXd(test_data.outputs - prior.mean.head(n)));
  const Eigen::MatrixXd v = tri_solve(chol.factor, k_tq);

  Posterior post;
  post.mean = prior.mean.tail(q) + k_tq.transpose() * alpha;
  post.cov = prior.cov.bottomRightCorner(q, q) - v.transpose() * v;
  post.cov = 0.5 * (post.cov + post.cov.transpose()).eval();
  for (Eigen::Index i = 0; i < q; ++i) {
    if (post.cov(i, i) < 0.0) post.cov(i, i) = 0.0;
  }
  return post;
}

TestPosteriorState::TestPosteriorState(const MetaModel& model, const PosteriorCache& cache,
                                       TestTaskParams params, DataSet test_data)
    : model_(&model), params_(std::move(params)), data_(std::move(test_data)) {
  validate_weights(model, params_.weights, "TestPosteriorState");
  if (params_.kernel.dim() != model.dim()) {
    throw std::invalid_argument("TestPosteriorState: kernel/model dimension mismatch");
  }
  if (!cache.matches(data_.inputs)) {
    throw StaleCacheError("TestPosteriorState: cache was built for different inputs");
  }
  const Eigen::Index n = data_.size();
  if (n == 0) return;

  Eigen::VectorXd prior_mean = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd k = kernel_matrix(data_.inputs, params_.kernel);
  meta_cross_.reserve(model.meta_gps.size());
  for (int m = 0; m < model.num_meta(); ++m) {
    const FittedGP& gp = model.meta_gps[static_cast<std::size_t>(m)];
    const double w = params_.weights.values[m];
    prior_mean += w * cache.means[static_cast<std::size_t>(m)];
    k += (w * w) * cache.covs[static_cast<std::size_t>(m)];
    meta_cross_.push_back(
        tri_solve(gp.chol, kernel_matrix(gp.data.inputs, data_.inputs, gp.kernel)));
  }
  k.diagonal().array() += params_.noise.noise_variance;
  CholeskyResult chol = cholesky_with_jitter(k);
  chol_ = std::move(chol.factor);
  z_ = tri_solve(chol_, data_.outputs - prior_mean);
}

Marginals TestPosteriorState::predict(const Eigen::MatrixXd& Xq) const {
  if (Xq.cols() != model_->dim()) {
    throw std::invalid_argument("TestPosteriorState::predict: query dimension mismatch");
  }
  const Eigen::Index q = Xq.rows();
  const Eigen::Index n = data_.size();

  Marginals out;
  out.mean = Eigen::VectorXd::Zero(q);
  out.var = Eigen::VectorXd::Constant(q, params_.kernel.outputscale);
  Eigen::MatrixXd prior_cross;
  if (n > 0) prior_cross = kernel_matrix(data_.inputs, Xq, params_.kernel);

  for (int m = 0; m < model_->num_meta(); ++m) {
    const FittedGP& gp = model_->meta_gps[static_cast<std::size_t>(m)];
    const double w = params_.weights.values[m];
    const Eigen::MatrixXd k_qm = kernel_matrix(Xq, gp.data.inputs, gp.kernel);
    out.mean += w * (eval_mean(gp.prior_mean, Xq) + k_qm * gp.alpha);
    const Eigen::MatrixXd b = tri_solve(gp.chol, k_qm.transpose());
    out.var += (w * w) *
               (Eigen::VectorXd::Constant(q, gp.kernel.outputscale) -
                b.colwise().squaredNorm().transpose().eval());
    if (n > 0) {
      prior_cross += (w * w) * (kernel_matrix(data_.inputs, Xq, gp.kernel) -
                                meta_cross_[static_cast<std::size_t>(m)].transpose() * b);
    }
  }
  if (n > 0) {
    const Eigen::MatrixXd v = tri_solve(chol_, prior_cross);
    out.mean += v.transpose() * z_;
    out.var -= v.colwise().squaredNorm().transpose();
  }
  out.var = out.var.cwiseMax(0.0);
  return out;
}

OraclePosterior joint_mtgp_oracle(const std::vector<DataSet>& meta_data, const DataSet& test_data,
                                  const MetaModel& model, const Eigen::MatrixXd& Xq) {
  const int num_meta = model.num_meta();
  if (static_cast<int>(meta_data.size()) != num_meta) {
    throw std::invalid_argument("joint_mtgp_oracle: meta_data count does not match model");
  }
  validate_weights(model, model.weights, "joint_mtgp_oracle");

  Eigen::Index total = test_data.size();
  for (const DataSet& d : meta_data) total += d.size();
  if (total > 500) {
    throw ResourceLimitError("joint_mtgp_oracle: " + std::to_string(total) +
                             " observations exceed the 500-point guard");
  }

  // Flatten all observations with their task ids (1..M meta, M+1 test).
  std::vector<Eigen::VectorXd> points;
  std::vector<int> tasks;
  std::vector<double> noise_vars;
  Eigen::VectorXd y(total);
  Eigen::Index row = 0;
  for (int m = 0; m < num_meta; ++m) {
    const DataSet& d = meta_data[static_cast<std::size_t>(m)];
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      points.push_back(d.inputs.row(i).transpose());
      tasks.push_back(m + 1);
      noise_vars.push_back(
          model.meta_gps[static_cast<std::size_t>(m)].noise.noise_variance);
      y[row++] = d.outputs[i];
    }
  }
  const int test_task = num_meta + 1;
  for (Eigen::Index i = 0; i < test_data.size(); ++i) {
    points.push_back(test_data.inputs.row(i).transpose());
    tasks.push_back(test_task);
    noise_vars.push_back(model.test_noise.noise_variance);
    y[row++] = test_data.outputs[i];
  }

  const Eigen::Index q = Xq.rows();
  OraclePosterior result;
  if (total == 0) {
    result.mean = Eigen::VectorXd::Zero(q);
    result.cov.resize(q, q);
    for (Eigen::Index i = 0; i < q; ++i) {
      for (Eigen::Index j = i; j < q; ++j) {
        const double v = joint_kernel(Xq.row(i).transpose(), test_task, Xq.row(j).transpose(),
                                      test_task, model);
        result.cov(i, j) = v;
        result.cov(j, i) = v;
      }
    }
    result.joint_log_lik = 0.0;
    return result;
  }

  Eigen::MatrixXd gram(total, total);
  for (Eigen::Index i = 0; i < total; ++i) {
    for (Eigen::Index j = i; j < total; ++j) {
      double v = joint_kernel(points[static_cast<std::size_t>(i)], tasks[static_cast<std::size_t>(i)],
                              points[static_cast<std::size_t>(j)], tasks[static_cast<std::size_t>(j)],
                              model);
      if (i == j) v += noise_vars[static_cast<std::size_t>(i)];
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  const CholeskyResult chol = cholesky_with_jitter(gram);
  const Eigen::VectorXd alpha = chol_solve(chol.factor, y);
  const Eigen::VectorXd z = tri_solve(chol.factor, y);
  result.joint_log_lik = -0.5 * z.squaredNorm() - 0.5 * chol_log_det(chol.factor) -
                         0.5 * static_cast<double>(total) * kLogTwoPi;

  Eigen::MatrixXd cross(total, q);
  for (Eigen::Index i = 0; i < total; ++i) {
    for (Eigen::Index j = 0; j < q; ++j) {
      cross(i, j) = joint_kernel(points[static_cast<std::size_t>(i)],
                                 tasks[static_cast<std::size_t>(i)], Xq.row(j).transpose(),
                                 test_task, model);
    }
  }
  Eigen::MatrixXd k_qq(q, q);
  for (Eigen::Index i = 0; i < q; ++i) {
    for (Eigen::Index j = i; j < q; ++j) {
      const double v = joint_kernel(Xq.row(i).transpose(), test_task, Xq.row(j).transpose(),
                                    test_task, model);
      k_qq(i, j) = v;
      k_qq(j, i) = v;
    }
  }
  result.mean = cross.transpose() * alpha;
  const Eigen::MatrixXd v = tri_solve(chol.factor, cross);
  result.cov = k_qq - v.transpose() * v;
  result.cov = 0.5 * (result.cov + result.cov.transpose()).eval();
  return result;
}

}  // namespace scamlgp
