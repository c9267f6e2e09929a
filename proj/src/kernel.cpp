#include "scamlgp/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace scamlgp {

namespace {

void check_dims(Eigen::Index cols, const KernelParams& params, const char* who) {
  if (params.lengthscales.size() == 0) {
    throw std::invalid_argument(std::string(who) + ": kernel has no lengthscales");
  }
  if (cols != params.dim()) {
    throw std::invalid_argument(std::string(who) + ": input dimension " + std::to_string(cols) +
                                " does not match " + std::to_string(params.dim()) +
                                " lengthscales");
  }
}

}  // namespace

double se_ard(const Eigen::VectorXd& x, const Eigen::VectorXd& x2, const KernelParams& params) {
  if (x.size() != x2.size()) {
    throw std::invalid_argument("se_ard: points have different dimensions");
  }
  check_dims(x.size(), params, "se_ard");
  double q = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double d = (x[i] - x2[i]) / params.lengthscales[i];
    q += d * d;
  }
  return params.outputscale * std::exp(-0.5 * q);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& X, const Eigen::MatrixXd& X2,
                              const KernelParams& params) {
  if (X.cols() != X2.cols()) {
    throw std::invalid_argument("kernel_matrix: point sets have different dimensions");
  }
  check_dims(X.cols(), params, "kernel_matrix");
  const Eigen::Index n = X.rows();
  const Eigen::Index m = X2.rows();
  const Eigen::Index d = X.cols();
  // Scale once, then accumulate squared distances dimension by dimension.
  const Eigen::VectorXd inv_l = params.lengthscales.cwiseInverse();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::VectorXd a = X.col(k) * inv_l[k];
    const Eigen::VectorXd b = X2.col(k) * inv_l[k];
    q.noalias() += (a.replicate(1, m) - b.transpose().replicate(n, 1)).array().square().matrix();
  }
  return params.outputscale * (-0.5 * q.array()).exp();
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& X, const KernelParams& params) {
  check_dims(X.cols(), params, "kernel_matrix");
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd result(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    result(i, i) = params.outputscale;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double q = 0.0;
      for (Eigen::Index k = 0; k < X.cols(); ++k) {
        const double d = (X(i, k) - X(j, k)) / params.lengthscales[k];
        q += d * d;
      }
      const double v = params.outputscale * std::exp(-0.5 * q);
      result(i, j) = v;
      result(j, i) = v;
    }
  }
  return result;
}

}  // namespace scamlgp
