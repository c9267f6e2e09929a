#pragma once

#include <Eigen/Dense>
#include <functional>

namespace scamlgp {

// Objective returning a value and filling the gradient at x.
using ObjectiveGrad = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LbfgsOptions {
  int max_iterations = 200;
  int history = 8;
  double grad_tol = 1e-6;    // on the projected gradient, infinity norm
  double armijo_c = 1e-4;
  int max_line_search = 50;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

// Minimizes f over the box [lower, upper] with a projected-gradient L-BFGS:
// two-loop recursion for the search direction, projection onto the box along
// the step, Armijo backtracking. Objective evaluations that throw during the
// line search are treated as +inf (the step shrinks); a throw at the initial
// point propagates.
LbfgsResult minimize_box_lbfgs(const ObjectiveGrad& f, Eigen::VectorXd x0,
                               const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                               const LbfgsOptions& options = {});

struct PatternSearchOptions {
  double initial_step = 0.1;
  double tol = 1e-6;  // terminate once the step falls below this
  int max_evaluations = 200000;
};

// Derivative-free compass search maximizing f over the box; probes +-step
// along each axis, halving the step when no probe improves.
Eigen::VectorXd pattern_search_maximize(const std::function<double(const Eigen::VectorXd&)>& f,
                                        Eigen::VectorXd x0, const Eigen::VectorXd& lower,
                                        const Eigen::VectorXd& upper,
                                        const PatternSearchOptions& options = {});

}  // namespace scamlgp
