#include "scamlgp/bo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "scamlgp/errors.hpp"
#include "scamlgp/optim.hpp"

namespace scamlgp {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  const auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(end - start).count();
}

}  // namespace

double ucb(double mean, double variance, const AcquisitionConfig& config) {
  if (variance < -1e-10) {
    throw std::invalid_argument("ucb: variance " + std::to_string(variance) +
                                " is negative beyond tolerance");
  }
  return mean + config.beta_sqrt * std::sqrt(std::max(variance, 0.0));
}

int maximize_acq_discrete(const PosteriorEvaluator& model, const DiscreteTable& table,
                          const std::vector<int>& visited, const AcquisitionConfig& config) {
  const Eigen::Index rows = table.candidates.rows();
  if (rows == 0) throw std::invalid_argument("maximize_acq_discrete: empty candidate table");

  std::vector<bool> seen(static_cast<std::size_t>(rows), false);
  for (const int v : visited) {
    if (v < 0 || v >= rows) {
      throw std::invalid_argument("maximize_acq_discrete: visited index out of range");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
  std::vector<Eigen::Index> open;
  open.reserve(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!seen[static_cast<std::size_t>(i)]) open.push_back(i);
  }
  if (open.empty()) {
    throw ExhaustedDomainError("maximize_acq_discrete: every candidate row is visited");
  }

  Eigen::MatrixXd batch(static_cast<Eigen::Index>(open.size()), table.candidates.cols());
  for (std::size_t i = 0; i < open.size(); ++i) batch.row(static_cast<Eigen::Index>(i)) = table.candidates.row(open[i]);
  const Marginals marg = model.evaluate(batch);

  int best_index = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < open.size(); ++i) {
    const double value = ucb(marg.mean[static_cast<Eigen::Index>(i)],
                             marg.var[static_cast<Eigen::Index>(i)], config);
    if (value > best_value) {  // strict: ties keep the lowest row index
      best_value = value;
      best_index = static_cast<int>(open[i]);
    }
  }
  return best_index;
}

Eigen::VectorXd maximize_acq_continuous(const PosteriorEvaluator& model, const ContinuousBox& box,
                                        const AcquisitionConfig& config, Rng& rng) {
  const Eigen::Index d = box.lower.size();
  if (d == 0 || box.upper.size() != d) {
    throw std::invalid_argument("maximize_acq_continuous: malformed box");
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(box.lower[i] <= box.upper[i])) {
      throw std::invalid_argument("maximize_acq_continuous: lower bound exceeds upper bound");
    }
  }
  if (config.candidate_pool < 1 || config.continuous_restarts < 1) {
    throw std::invalid_argument("maximize_acq_continuous: pool and restarts must be >= 1");
  }

  const int pool = config.candidate_pool;
  Eigen::MatrixXd candidates(pool, d);
  for (int i = 0; i < pool; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      candidates(i, j) = rng.uniform(box.lower[j], box.upper[j]);
    }
  }
  const Marginals marg = model.evaluate(candidates);
  Eigen::VectorXd scores(pool);
  for (int i = 0; i < pool; ++i) scores[i] = ucb(marg.mean[i], marg.var[i], config);

  const int starts = std::min(config.continuous_restarts, pool);
  std::vector<int> order(static_cast<std::size_t>(pool));
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + starts, order.end(),
                    [&](int a, int b) { return scores[a] > scores[b]; });

  auto acq_single = [&](const Eigen::VectorXd& x) {
    const Marginals m = model.evaluate(x.transpose());
    return ucb(m.mean[0], m.var[0], config);
  };

  Eigen::VectorXd best_x = candidates.row(order[0]).transpose();
  double best_value = -std::numeric_limits<double>::infinity();
  PatternSearchOptions ps;
  ps.initial_step = 0.1;
  ps.tol = 1e-6;
  for (int s = 0; s < starts; ++s) {
    const Eigen::VectorXd refined = pattern_search_maximize(
        acq_single, candidates.row(order[static_cast<std::size_t>(s)]).transpose(), box.lower,
        box.upper, ps);
    const double value = acq_single(refined);
    if (value > best_value) {
      best_value = value;
      best_x = refined;
    }
  }
  return best_x;
}

BOState bo_step(BOState state, SurrogateModel& model, const ObjectiveFn& objective,
                const Domain& domain, const AcquisitionConfig& config, double true_max, Rng& rng,
                bool record_timings) {
  if (const auto* table = std::get_if<DiscreteTable>(&domain)) {
    if (static_cast<Eigen::Index>(state.visited.size()) >= table->candidates.rows()) {
      state.truncated = true;
      return state;
    }
  }

  const auto fit_start = std::chrono::steady_clock::now();
  model.refit(state.test_data, rng);
  const double fit_ms = record_timings ? elapsed_ms(fit_start) : 0.0;

  const auto acq_start = std::chrono::steady_clock::now();
  Eigen::VectorXd x;
  if (const auto* table = std::get_if<DiscreteTable>(&domain)) {
    const int index = maximize_acq_discrete(model, *table, state.visited, config);
    state.visited.push_back(index);
    x = table->candidates.row(index).transpose();
  } else {
    x = maximize_acq_continuous(model, std::get<ContinuousBox>(domain), config, rng);
  }
  const double acq_ms = record_timings ? elapsed_ms(acq_start) : 0.0;

  const Observation obs = objective(x);
  state.test_data.append(x, obs.y_noisy);
  state.incumbent_value = std::max(state.incumbent_value, obs.y_noisy);
  state.best_noiseless = std::max(state.best_noiseless, obs.f_noiseless);

  TraceRecord record;
  record.iteration = static_cast<int>(state.trace.size()) + 1;
  record.x = x;
  record.y_noisy = obs.y_noisy;
  record.f_noiseless = obs.f_noiseless;
  record.simple_regret = simple_regret(true_max, state);
  record.cumulative_regret =
      (state.trace.empty() ? 0.0 : state.trace.back().cumulative_regret) + record.simple_regret;
  record.fit_ms = fit_ms;
  record.acq_ms = acq_ms;
  state.trace.push_back(std::move(record));
  return state;
}

double simple_regret(double true_max, const BOState& state) {
  if (state.test_data.size() == 0) return std::numeric_limits<double>::infinity();
  return std::max(0.0, true_max - state.best_noiseless);
}

double cumulative_regret(const std::vector<TraceRecord>& trace) {
  double total = 0.0;
  for (const TraceRecord& r : trace) total += r.simple_regret;
  return total;
}

}  // namespace scamlgp
