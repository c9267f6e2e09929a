#pragma once

#include <Eigen/Dense>
#include <vector>

namespace scamlgp {

enum class NormalizationMode {
  kPerTask,    // stats of this task's outputs only
  kJointTest,  // stats of the test outputs pooled with every meta task's raw outputs
};

// Affine output transform y -> (y - mean) / std with a floored population
// std, so constant outputs map to zero instead of dividing by zero.
struct OutputNormalization {
  double mean = 0.0;
  double std = 1.0;
  bool floored = false;

  double apply(double y) const { return (y - mean) / std; }
  Eigen::VectorXd apply(const Eigen::VectorXd& y) const;
  double invert(double z) const { return z * std + mean; }
  double invert_variance(double v) const { return v * std * std; }
};

// Computes normalization statistics. kPerTask requires nonempty values;
// kJointTest pools values with meta_outputs and tolerates empty values as
// long as the pool itself is nonempty. Population (divide by N) convention,
// std floored at 1e-12.
OutputNormalization compute_output_normalization(
    const Eigen::VectorXd& values, NormalizationMode mode,
    const std::vector<Eigen::VectorXd>& meta_outputs = {});

// Convenience: stats plus the transformed values.
std::pair<Eigen::VectorXd, OutputNormalization> normalize_outputs(
    const Eigen::VectorXd& values, NormalizationMode mode,
    const std::vector<Eigen::VectorXd>& meta_outputs = {});

}  // namespace scamlgp
