#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "scamlgp/gp.hpp"

namespace scamlgp {

// Scale factors tying each meta-task GP into the test-task prior.
struct TaskWeights {
  Eigen::VectorXd values;  // one per meta task, strictly positive when fitted

  Eigen::Index size() const { return values.size(); }
};

// Fixed-hyperparameter multi-task model: M meta-task GPs (already
// conditioned on their data), the weights, and the residual test kernel.
struct MetaModel {
  std::vector<FittedGP> meta_gps;
  TaskWeights weights;
  KernelParams test_kernel;
  NoiseParams test_noise;

  int num_meta() const { return static_cast<int>(meta_gps.size()); }
  Eigen::Index dim() const { return test_kernel.dim(); }
};

// Per-refit cache of each meta GP's posterior evaluated at the test inputs.
// Keyed by a content hash of the inputs it was built for; consumers reject
// stale caches instead of silently recomputing.
struct PosteriorCache {
  Eigen::MatrixXd inputs;                 // the X_t this cache was built for
  std::vector<Eigen::VectorXd> means;     // mu_m(X_t)
  std::vector<Eigen::MatrixXd> covs;      // Sigma_m(X_t, X_t)
  std::uint64_t key = 0;

  bool matches(const Eigen::MatrixXd& X) const;
};

PosteriorCache build_posterior_cache(const MetaModel& model, const Eigen::MatrixXd& X);

// Kernel and noise hyperparameters plus weights for the test task.
struct TestTaskParams {
  KernelParams kernel;
  NoiseParams noise;
  TaskWeights weights;
};

// Coregionalization matrix of one latent GP over task indices {1..M+1},
// where task M+1 is the test task. For a meta task m: unit self-covariance,
// w on the meta/test cross terms, w^2 on the test diagonal. For the test
// task's own latent GP only the test diagonal is 1.
Eigen::MatrixXd coreg_matrix(int task, double weight, int num_meta);

// Joint kernel over (input, task) pairs implied by the sum of latent GPs.
double joint_kernel(const Eigen::VectorXd& x, int task, const Eigen::VectorXd& x2, int task2,
                    const MetaModel& model);

// Derivation rule for per-task fitting streams: depends on the dataset's
// content, not its position, so task order cannot change any fit.
Rng meta_task_rng(const Rng& base, const DataSet& data);

// Fits one GP per meta task (MAP-II with multi-restart). Errors from a task
// are annotated with its index.
std::vector<FittedGP> fit_meta_tasks(const std::vector<DataSet>& meta_data,
                                     const GpHyperPriors& priors, int restarts, const Rng& rng);

// Test-task prior induced by the meta-task posteriors:
//   mean(X)  = sum_m w_m mu_m(X)
//   cov(X)   = k_t(X, X) + sum_m w_m^2 Sigma_m(X, X)
// With cache == nullptr the meta posteriors are computed on the fly; a cache
// built for different inputs raises StaleCacheError.
Posterior test_prior(const MetaModel& model, const PosteriorCache* cache,
                     const Eigen::MatrixXd& X);

// log p(y_t | X_t, theta_t, meta posteriors): Gaussian log-density of the
// test observations under the test prior plus observation noise.
double test_task_log_likelihood(const TestTaskParams& params, const MetaModel& model,
                                const PosteriorCache& cache, const DataSet& test_data);

// MAP fit of the test-task parameters (kernel, noise, weights) against the
// cached meta posteriors. With no test data returns the bootstrap setting:
// unit weights, prior-median kernel and noise. warm_start, when given, is
// polished as one extra restart candidate.
TestTaskParams fit_test_hypers(const MetaModel& model, const PosteriorCache& cache,
                               const DataSet& test_data, const TestTaskPriors& priors,
                               int restarts, Rng& rng,
                               const TestTaskParams* warm_start = nullptr);

// Test-task posterior at query points: the test prior conditioned on the
// test observations under noise sigma_t^2.
Posterior test_posterior(const MetaModel& model, const PosteriorCache& cache,
                         const TestTaskParams& params, const DataSet& test_data,
                         const Eigen::MatrixXd& Xq);

// Conditioning state for repeated marginal queries at fixed parameters and
// test data; precomputes everything that does not depend on the query batch.
class TestPosteriorState {
 public:
  TestPosteriorState(const MetaModel& model, const PosteriorCache& cache, TestTaskParams params,
                     DataSet test_data);

  Marginals predict(const Eigen::MatrixXd& Xq) const;
  const TestTaskParams& params() const { return params_; }

 private:
  const MetaModel* model_;
  TestTaskParams params_;
  DataSet data_;
  std::vector<Eigen::MatrixXd> meta_cross_;  // per m: L_m^{-1} k_m(X_m, X_t)
  Eigen::MatrixXd chol_;                     // factor of prior cov at X_t + noise
  Eigen::VectorXd z_;                        // chol_^{-1} (y_t - prior mean)
};

struct OraclePosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double joint_log_lik = 0.0;
};

// Brute-force reference: assembles the dense multi-task Gram over all meta
// and test observations, conditions jointly, and reports the posterior for
// the test task at Xq plus the joint data log-likelihood. Refuses more than
// 500 total observations (ResourceLimitError); this is a correctness oracle,
// not a production path.
OraclePosterior joint_mtgp_oracle(const std::vector<DataSet>& meta_data, const DataSet& test_data,
                                  const MetaModel& model, const Eigen::MatrixXd& Xq);

}  // namespace scamlgp
