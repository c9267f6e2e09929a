#include "scamlgp/optim.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace scamlgp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd clip_to_box(Eigen::VectorXd x, const Eigen::VectorXd& lower,
                            const Eigen::VectorXd& upper) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i]) x[i] = lower[i];
    if (x[i] > upper[i]) x[i] = upper[i];
  }
  return x;
}

void check_box(const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
               const Eigen::VectorXd& upper, const char* who) {
  if (lower.size() != x0.size() || upper.size() != x0.size()) {
    throw std::invalid_argument(std::string(who) + ": box and x0 dimensions differ");
  }
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    if (!(lower[i] <= upper[i])) {
      throw std::invalid_argument(std::string(who) + ": lower bound exceeds upper bound");
    }
  }
}

struct Correction {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

// Two-loop recursion: returns an approximation of H * g (H ~ inverse Hessian).
Eigen::VectorXd two_loop(const Eigen::VectorXd& g, const std::deque<Correction>& hist) {
  Eigen::VectorXd q = g;
  std::vector<double> alpha(hist.size());
  for (std::size_t i = hist.size(); i-- > 0;) {
    alpha[i] = hist[i].rho * hist[i].s.dot(q);
    q -= alpha[i] * hist[i].y;
  }
  if (!hist.empty()) {
    const Correction& last = hist.back();
    const double gamma = last.s.dot(last.y) / last.y.squaredNorm();
    q *= gamma;
  }
  for (std::size_t i = 0; i < hist.size(); ++i) {
    const double beta = hist[i].rho * hist[i].y.dot(q);
    q += (alpha[i] - beta) * hist[i].s;
  }
  return q;
}

}  // namespace

LbfgsResult minimize_box_lbfgs(const ObjectiveGrad& f, Eigen::VectorXd x0,
                               const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                               const LbfgsOptions& options) {
  check_box(x0, lower, upper, "minimize_box_lbfgs");
  LbfgsResult result;
  if (x0.size() == 0) {
    result.x = x0;
    result.converged = true;
    return result;
  }

  Eigen::VectorXd x = clip_to_box(std::move(x0), lower, upper);
  const Eigen::Index n = x.size();
  Eigen::VectorXd g(n);
  double fx = f(x, g);  // a throw here propagates to the caller
  int evals = 1;

  std::deque<Correction> history;
  auto projected_gradient = [&](const Eigen::VectorXd& xx, const Eigen::VectorXd& gg) {
    Eigen::VectorXd pg = gg;
    for (Eigen::Index i = 0; i < n; ++i) {
      if ((xx[i] <= lower[i] && gg[i] > 0.0) || (xx[i] >= upper[i] && gg[i] < 0.0)) pg[i] = 0.0;
    }
    return pg;
  };

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const Eigen::VectorXd pg = projected_gradient(x, g);
    if (pg.lpNorm<Eigen::Infinity>() <= options.grad_tol) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd direction = -two_loop(pg, history);
    if (!direction.allFinite() || direction.dot(pg) >= 0.0) {
      direction = -pg;  // fall back to steepest descent
    }

    // First step is conservative when no curvature information exists yet.
    double t = history.empty() ? std::min(1.0, 1.0 / (1.0 + pg.lpNorm<1>())) : 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new(n), g_new(n);
    double fx_new = 0.0;
    for (int ls = 0; ls < options.max_line_search; ++ls) {
      x_new = clip_to_box(x + t * direction, lower, upper);
      const Eigen::VectorXd displacement = x_new - x;
      if (displacement.lpNorm<Eigen::Infinity>() < 1e-15) break;
      bool eval_ok = true;
      try {
        fx_new = f(x_new, g_new);
        ++evals;
      } catch (const std::runtime_error&) {
        eval_ok = false;
        ++evals;
      }
      if (eval_ok && std::isfinite(fx_new)) {
        const double slope = g.dot(displacement);
        const double threshold =
            slope < 0.0 ? fx + options.armijo_c * slope : fx - 1e-16 * std::abs(fx);
        if (fx_new <= threshold) {
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) break;  // stagnated; keep the best point found so far

    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      history.push_back(Correction{s, y, 1.0 / sy});
      if (static_cast<int>(history.size()) > options.history) history.pop_front();
    }
    x = std::move(x_new);
    g = g_new;
    fx = fx_new;
  }

  result.x = std::move(x);
  result.value = fx;
  result.iterations = iter;
  result.evaluations = evals;
  return result;
}

Eigen::VectorXd pattern_search_maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                                        Eigen::VectorXd x0, const Eigen::VectorXd& lower,
                                        const Eigen::VectorXd& upper,
                                        const PatternSearchOptions& options) {
  check_box(x0, lower, upper, "pattern_search_maximize");
  if (x0.size() == 0) return x0;
  Eigen::VectorXd x = clip_to_box(std::move(x0), lower, upper);
  const Eigen::Index n = x.size();

  Eigen::VectorXd range(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = upper[i] - lower[i];
    range[i] = (std::isfinite(r) && r > 0.0) ? r : 1.0;
  }

  double fx = f(x);
  int evals = 1;
  double step = options.initial_step;
  while (step >= options.tol && evals < options.max_evaluations) {
    bool improved = false;
    for (Eigen::Index i = 0; i < n && !improved; ++i) {
      for (const double sign : {1.0, -1.0}) {
        Eigen::VectorXd probe = x;
        probe[i] = std::min(upper[i], std::max(lower[i], x[i] + sign * step * range[i]));
        if (probe[i] == x[i]) continue;
        const double fp = f(probe);
        ++evals;
        if (fp > fx) {
          x = std::move(probe);
          fx = fp;
          improved = true;
          break;
        }
        if (evals >= options.max_evaluations) break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return x;
}

}  // namespace scamlgp
