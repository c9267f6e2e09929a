#pragma once

#include <Eigen/Dense>
#include <functional>

#include "scamlgp/kernel.hpp"
#include "scamlgp/linalg.hpp"
#include "scamlgp/priors.hpp"
#include "scamlgp/rng.hpp"

namespace scamlgp {

struct NoiseParams {
  double noise_variance = 1e-6;
};

// Observations for one task. Inputs are row vectors, typically normalized to
// the unit cube by the harness before they reach the models.
struct DataSet {
  Eigen::MatrixXd inputs;   // N x d
  Eigen::VectorXd outputs;  // N

  DataSet() = default;
  DataSet(Eigen::MatrixXd in, Eigen::VectorXd out);
  static DataSet empty(Eigen::Index dim) { return DataSet(Eigen::MatrixXd(0, dim), {}); }

  Eigen::Index size() const { return inputs.rows(); }
  Eigen::Index dim() const { return inputs.cols(); }
  void append(const Eigen::VectorXd& x, double y);
};

// Prior mean function evaluated on a batch of points; an empty std::function
// means the zero mean.
using MeanFn = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;
Eigen::VectorXd eval_mean(const MeanFn& mean, const Eigen::MatrixXd& X);

// A GP conditioned on data: stores the Cholesky factor of K + sigma^2 I and
// the weights alpha = (K + sigma^2 I)^{-1} (y - m(X)) so predictions are
// cheap. size() == 0 is valid and represents the prior.
struct FittedGP {
  DataSet data;
  KernelParams kernel;
  NoiseParams noise;
  MeanFn prior_mean;     // empty => zero mean
  Eigen::MatrixXd chol;  // lower factor of K(X,X) + sigma^2 I (+ jitter)
  Eigen::VectorXd alpha;
  double jitter = 0.0;

  Eigen::Index size() const { return data.size(); }
};

FittedGP condition_gp(DataSet data, KernelParams kernel, NoiseParams noise,
                      MeanFn prior_mean = {});

struct Posterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

struct Marginals {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
};

// Full joint posterior over the query points.
Posterior gp_posterior(const FittedGP& gp, const Eigen::MatrixXd& Xq);
// Means and variances only; cheaper for large query batches.
Marginals gp_posterior_marginals(const FittedGP& gp, const Eigen::MatrixXd& Xq);

// log p(y | X, theta) for a GP with Gaussian observation noise. N >= 1.
double log_marginal_likelihood(const KernelParams& kernel, const NoiseParams& noise,
                               const DataSet& data, const MeanFn& prior_mean = {});

// Gradient of the log marginal likelihood with respect to
// [log l_1..d, log outputscale, log noise_variance].
Eigen::VectorXd lml_gradient(const KernelParams& kernel, const NoiseParams& noise,
                             const DataSet& data, const MeanFn& prior_mean = {});

// Log marginal likelihood plus log prior densities. Throws
// std::invalid_argument when a hyperparameter is outside its prior's box.
double log_map_objective(const KernelParams& kernel, const NoiseParams& noise,
                         const DataSet& data, const GpHyperPriors& priors,
                         const MeanFn& prior_mean = {});

// Multi-restart MAP-II fit: initial guesses drawn from the priors, each
// polished with box-constrained L-BFGS in log space, best result kept.
// Empty data yields a prior-median GP. Throws FitError if every restart
// fails.
FittedGP fit_map(DataSet data, const GpHyperPriors& priors, MeanFn prior_mean, int restarts,
                 Rng& rng);

}  // namespace scamlgp
