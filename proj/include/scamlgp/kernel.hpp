#pragma once

#include <Eigen/Dense>

namespace scamlgp {

// Squared-exponential ARD kernel parameters. One lengthscale per input
// dimension, a single signal variance (outputscale).
struct KernelParams {
  Eigen::VectorXd lengthscales;
  double outputscale = 1.0;

  Eigen::Index dim() const { return lengthscales.size(); }
};

// k(x, x') = outputscale * exp(-0.5 * sum_i ((x_i - x'_i) / l_i)^2)
double se_ard(const Eigen::VectorXd& x, const Eigen::VectorXd& x2, const KernelParams& params);

// Cross-covariance matrix; rows of X and X2 are points.
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& X, const Eigen::MatrixXd& X2,
                              const KernelParams& params);

// Self-covariance; exactly symmetric with outputscale on the diagonal.
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& X, const KernelParams& params);

}  // namespace scamlgp
