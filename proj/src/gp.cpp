#include "scamlgp/gp.hpp"

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

void validate_hyperparams(const KernelParams& kernel, const NoiseParams& noise, const char* who) {
  for (Eigen::Index i = 0; i < kernel.dim(); ++i) {
    if (!(kernel.lengthscales[i] > 0.0)) {
      throw std::invalid_argument(std::string(who) + ": lengthscales must be positive");
    }
  }
  if (!(kernel.outputscale > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": outputscale must be positive");
  }
  if (!(noise.noise_variance >= 0.0)) {
    throw std::invalid_argument(std::string(who) + ": noise variance must be nonnegative");
  }
}

// Shared likelihood computation. Returns the log marginal likelihood; fills
// *grad (w.r.t. [log l_1..d, log s, log sigma2]) when grad != nullptr.
double lml_impl(const KernelParams& kernel, const NoiseParams& noise, const DataSet& data,
                const MeanFn& prior_mean, Eigen::VectorXd* grad) {
  const Eigen::Index n = data.size();
  const Eigen::Index d = data.dim();
  if (n < 1) throw std::invalid_argument("log_marginal_likelihood: need at least one observation");
  if (kernel.dim() != d) {
    throw std::invalid_argument("log_marginal_likelihood: kernel/input dimension mismatch");
  }
  validate_hyperparams(kernel, noise, "log_marginal_likelihood");

  const Eigen::MatrixXd k_signal = kernel_matrix(data.inputs, kernel);
  Eigen::MatrixXd k_noisy = k_signal;
  k_noisy.diagonal().array() += noise.noise_variance;
  const CholeskyResult chol = cholesky_with_jitter(k_noisy);

  const Eigen::VectorXd residual = data.outputs - eval_mean(prior_mean, data.inputs);
  const Eigen::VectorXd alpha = chol_solve(chol.factor, residual);
  const double value = -0.5 * residual.dot(alpha) - 0.5 * chol_log_det(chol.factor) -
                       0.5 * static_cast<double>(n) * kLogTwoPi;

  if (grad != nullptr) {
    const Eigen::MatrixXd k_inv =
        chol_solve(chol.factor, Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n)));
    const Eigen::MatrixXd a = alpha * alpha.transpose() - k_inv;
    grad->resize(d + 2);
    for (Eigen::Index i = 0; i < d; ++i) {
      // dK/dlog l_i = K_signal .* ((x_i - x'_i)/l_i)^2
      const Eigen::VectorXd col = data.inputs.col(i) / kernel.lengthscales[i];
      const Eigen::MatrixXd dsq = (col.replicate(1, n) - col.transpose().replicate(n, 1))
                                      .array()
                                      .square()
                                      .matrix();
      (*grad)[i] = 0.5 * (a.array() * k_signal.array() * dsq.array()).sum();
    }
    (*grad)[d] = 0.5 * (a.array() * k_signal.array()).sum();
    (*grad)[d + 1] = 0.5 * noise.noise_variance * a.trace();
  }
  return value;
}

double prior_log_density(const KernelParams& kernel, const NoiseParams& noise,
                         const GpHyperPriors& priors) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < kernel.dim(); ++i) {
    total += priors.lengthscale.dist.log_pdf(kernel.lengthscales[i]);
  }
  total += priors.outputscale.dist.log_pdf(kernel.outputscale);
  total += priors.noise.dist.log_pdf(noise.noise_variance);
  return total;
}

}  // namespace

DataSet::DataSet(Eigen::MatrixXd in, Eigen::VectorXd out)
    : inputs(std::move(in)), outputs(std::move(out)) {
  if (inputs.rows() != outputs.size()) {
    throw std::invalid_argument("DataSet: inputs and outputs disagree on N");
  }
}

void DataSet::append(const Eigen::VectorXd& x, double y) {
  if (size() > 0 && x.size() != dim()) {
    throw std::invalid_argument("DataSet::append: dimension mismatch");
  }
  const Eigen::Index n = size();
  if (n == 0 && inputs.cols() == 0) {
    inputs.resize(0, x.size());
  } else if (x.size() != inputs.cols()) {
    throw std::invalid_argument("DataSet::append: dimension mismatch");
  }
  inputs.conservativeResize(n + 1, Eigen::NoChange);
  inputs.row(n) = x.transpose();
  outputs.conservativeResize(n + 1);
  outputs[n] = y;
}

Eigen::VectorXd eval_mean(const MeanFn& mean, const Eigen::MatrixXd& X) {
  if (!mean) return Eigen::VectorXd::Zero(X.rows());
  Eigen::VectorXd m = mean(X);
  if (m.size() != X.rows()) {
    throw std::invalid_argument("eval_mean: mean function returned wrong length");
  }
  return m;
}

FittedGP condition_gp(DataSet data, KernelParams kernel, NoiseParams noise, MeanFn prior_mean) {
  if (data.size() > 0 && kernel.dim() != data.dim()) {
    throw std::invalid_argument("condition_gp: kernel/input dimension mismatch");
  }
  validate_hyperparams(kernel, noise, "condition_gp");
  FittedGP gp;
  gp.kernel = std::move(kernel);
  gp.noise = noise;
  gp.prior_mean = std::move(prior_mean);
  if (data.size() == 0) {
    gp.data = std::move(data);
    return gp;
  }
  Eigen::MatrixXd k = kernel_matrix(data.inputs, gp.kernel);
  k.diagonal().array() += noise.noise_variance;
  CholeskyResult chol = cholesky_with_jitter(k);
  const Eigen::VectorXd residual = data.outputs - eval_mean(gp.prior_mean, data.inputs);
  gp.alpha = chol_solve(chol.factor, residual);
  gp.chol = std::move(chol.factor);
  gp.jitter = chol.jitter;
  gp.data = std::move(data);
  return gp;
}

Posterior gp_posterior(const FittedGP& gp, const Eigen::MatrixXd& Xq) {
  if (Xq.cols() != gp.kernel.dim()) {
    throw std::invalid_argument("gp_posterior: query dimension mismatch");
  }
  Posterior post;
  post.mean = eval_mean(gp.prior_mean, Xq);
  post.cov = kernel_matrix(Xq, gp.kernel);
  if (gp.size() == 0) return post;

  const Eigen::MatrixXd k_qx = kernel_matrix(Xq, gp.data.inputs, gp.kernel);
  post.mean.noalias() += k_qx * gp.alpha;
  const Eigen::MatrixXd v = tri_solve(gp.chol, k_qx.transpose());
  post.cov.noalias() -= v.transpose() * v;
  post.cov = 0.5 * (post.cov + post.cov.transpose()).eval();
  for (Eigen::Index i = 0; i < post.cov.rows(); ++i) {
    if (post.cov(i, i) < 0.0) post.cov(i, i) = 0.0;
  }
  return post;
}

Marginals gp_posterior_marginals(const FittedGP& gp, const Eigen::MatrixXd& Xq) {
  if (Xq.cols() != gp.kernel.dim()) {
    throw std::invalid_argument("gp_posterior_marginals: query dimension mismatch");
  }
  Marginals out;
  out.mean = eval_mean(gp.prior_mean, Xq);
  out.var = Eigen::VectorXd::Constant(Xq.rows(), gp.kernel.outputscale);
  if (gp.size() == 0) return out;

  const Eigen::MatrixXd k_qx = kernel_matrix(Xq, gp.data.inputs, gp.kernel);
  out.mean.noalias() += k_qx * gp.alpha;
  const Eigen::MatrixXd v = tri_solve(gp.chol, k_qx.transpose());
  out.var -= v.colwise().squaredNorm().transpose();
  out.var = out.var.cwiseMax(0.0);
  return out;
}

double log_marginal_likelihood(const KernelParams& kernel, const NoiseParams& noise,
                               const DataSet& data, const MeanFn& prior_mean) {
  return lml_impl(kernel, noise, data, prior_mean, nullptr);
}

Eigen::VectorXd lml_gradient(const KernelParams& kernel, const NoiseParams& noise,
                             const DataSet& data, const MeanFn& prior_mean) {
  Eigen::VectorXd grad;
  lml_impl(kernel, noise, data, prior_mean, &grad);
  return grad;
}

double log_map_objective(const KernelParams& kernel, const NoiseParams& noise,
                         const DataSet& data, const GpHyperPriors& priors,
                         const MeanFn& prior_mean) {
  for (Eigen::Index i = 0; i < kernel.dim(); ++i) {
    if (!priors.lengthscale.contains(kernel.lengthscales[i])) {
      throw std::invalid_argument("log_map_objective: lengthscale outside its box");
    }
  }
  if (!priors.outputscale.contains(kernel.outputscale)) {
    throw std::invalid_argument("log_map_objective: outputscale outside its box");
  }
  if (!priors.noise.contains(noise.noise_variance)) {
    throw std::invalid_argument("log_map_objective: noise variance outside its box");
  }
  return log_marginal_likelihood(kernel, noise, data, prior_mean) +
         prior_log_density(kernel, noise, priors);
}

FittedGP fit_map(DataSet data, const GpHyperPriors& priors, MeanFn prior_mean, int restarts,
                 Rng& rng) {
  if (restarts < 1) throw std::invalid_argument("fit_map: restarts must be >= 1");
  const Eigen::Index d = data.dim();
  if (d == 0) {
    throw std::invalid_argument("fit_map: data has no input dimension; use DataSet::empty(d)");
  }
  if (data.size() == 0) {
    KernelParams kernel;
    kernel.lengthscales =
        Eigen::VectorXd::Constant(d, priors.lengthscale.median_clipped());
    kernel.outputscale = priors.outputscale.median_clipped();
    NoiseParams noise{priors.noise.median_clipped()};
    return condition_gp(std::move(data), std::move(kernel), noise, std::move(prior_mean));
  }

  const Eigen::Index nparams = d + 2;
  Eigen::VectorXd lo(nparams), hi(nparams);
  for (Eigen::Index i = 0; i < d; ++i) {
    lo[i] = std::log(priors.lengthscale.lower);
    hi[i] = std::log(priors.lengthscale.upper);
  }
  lo[d] = std::log(priors.outputscale.lower);
  hi[d] = std::log(priors.outputscale.upper);
  lo[d + 1] = std::log(priors.noise.lower);
  hi[d + 1] = std::log(priors.noise.upper);

  auto unpack = [d](const Eigen::VectorXd& u) {
    KernelParams kernel;
    kernel.lengthscales = u.head(d).array().exp();
    kernel.outputscale = std::exp(u[d]);
    NoiseParams noise{std::exp(u[d + 1])};
    return std::make_pair(kernel, noise);
  };

  // Negated MAP objective with gradient, in log space.
  ObjectiveGrad objective = [&](const Eigen::VectorXd& u, Eigen::VectorXd& grad) {
    const auto [kernel, noise] = unpack(u);
    Eigen::VectorXd lml_grad;
    const double lml = lml_impl(kernel, noise, data, prior_mean, &lml_grad);
    double value = lml;
    for (Eigen::Index i = 0; i < d; ++i) {
      value += priors.lengthscale.dist.log_pdf(kernel.lengthscales[i]);
      lml_grad[i] += priors.lengthscale.dist.dlogpdf_dlogx(kernel.lengthscales[i]);
    }
    value += priors.outputscale.dist.log_pdf(kernel.outputscale);
    lml_grad[d] += priors.outputscale.dist.dlogpdf_dlogx(kernel.outputscale);
    value += priors.noise.dist.log_pdf(noise.noise_variance);
    lml_grad[d + 1] += priors.noise.dist.dlogpdf_dlogx(noise.noise_variance);
    grad = -lml_grad;
    return -value;
  };

  bool have_best = false;
  double best_value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_u;
  std::string first_failure;
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd u0(nparams);
    for (Eigen::Index i = 0; i < d; ++i) {
      u0[i] = std::log(priors.lengthscale.sample_clipped(rng));
    }
    u0[d] = std::log(priors.outputscale.sample_clipped(rng));
    u0[d + 1] = std::log(priors.noise.sample_clipped(rng));
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
    throw FitError("fit_map: all " + std::to_string(restarts) +
                   " restarts failed; first failure: " + first_failure);
  }
  auto [kernel, noise] = unpack(best_u);
  return condition_gp(std::move(data), std::move(kernel), noise, std::move(prior_mean));
}

}  // namespace scamlgp
