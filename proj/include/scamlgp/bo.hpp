#pragma once

#include <Eigen/Dense>
#include <functional>
#include <variant>
#include <vector>

#include "scamlgp/gp.hpp"

namespace scamlgp {

struct ContinuousBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

// Finite candidate set; rows are points, visited rows are excluded from
// acquisition.
struct DiscreteTable {
  Eigen::MatrixXd candidates;
};

using Domain = std::variant<ContinuousBox, DiscreteTable>;

struct AcquisitionConfig {
  double beta_sqrt = 3.0;     // UCB exploration coefficient on the stddev
  int continuous_restarts = 8;
  int candidate_pool = 1024;
};

// Posterior mean/variance provider over query batches. Surrogates implement
// this; tests can stub it with closed-form surfaces.
class PosteriorEvaluator {
 public:
  virtual ~PosteriorEvaluator() = default;
  virtual Marginals evaluate(const Eigen::MatrixXd& Xq) const = 0;
};

// A surrogate that can additionally be refit to the current test data.
class SurrogateModel : public PosteriorEvaluator {
 public:
  virtual void refit(const DataSet& test_data, Rng& rng) = 0;
};

struct TraceRecord {
  int iteration = 0;           // 1-based
  Eigen::VectorXd x;           // unit-cube point that was evaluated
  double y_noisy = 0.0;
  double f_noiseless = 0.0;
  double simple_regret = 0.0;
  double cumulative_regret = 0.0;
  double fit_ms = 0.0;
  double acq_ms = 0.0;
};

struct BOState {
  DataSet test_data;
  double incumbent_value = -std::numeric_limits<double>::infinity();  // best noisy y
  double best_noiseless = -std::numeric_limits<double>::infinity();
  std::vector<TraceRecord> trace;
  std::vector<int> visited;  // discrete domains: rows already evaluated
  bool truncated = false;    // discrete domain ran out of candidates
};

// alpha(x) = mean + beta_sqrt * sqrt(variance). Variance below -1e-10 is an
// error; small negative values are clamped to zero.
double ucb(double mean, double variance, const AcquisitionConfig& config);

// Highest-UCB unvisited row; ties resolved toward the lowest index. Throws
// ExhaustedDomainError when every row is visited.
int maximize_acq_discrete(const PosteriorEvaluator& model, const DiscreteTable& table,
                          const std::vector<int>& visited, const AcquisitionConfig& config);

// Sample a candidate pool, keep the best continuous_restarts starts, refine
// each with pattern search to step tolerance 1e-6, return the best point.
Eigen::VectorXd maximize_acq_continuous(const PosteriorEvaluator& model, const ContinuousBox& box,
                                        const AcquisitionConfig& config, Rng& rng);

struct Observation {
  double y_noisy = 0.0;
  double f_noiseless = 0.0;
};

using ObjectiveFn = std::function<Observation(const Eigen::VectorXd& x)>;

// One BO iteration: refit the surrogate, acquire, evaluate, update regret.
// On an exhausted discrete domain the state is returned unchanged except for
// the truncation flag. Timing columns stay zero unless record_timings.
BOState bo_step(BOState state, SurrogateModel& model, const ObjectiveFn& objective,
                const Domain& domain, const AcquisitionConfig& config, double true_max, Rng& rng,
                bool record_timings = false);

// max(0, true_max - best noiseless value observed so far); +inf before the
// first observation.
double simple_regret(double true_max, const BOState& state);

// Sum of per-iteration simple regrets recorded in the trace.
double cumulative_regret(const std::vector<TraceRecord>& trace);

}  // namespace scamlgp
