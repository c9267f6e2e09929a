#include "scamlgp/normalization.hpp"

#include <cmath>
#include <stdexcept>

namespace scamlgp {

namespace {
constexpr double kStdFloor = 1e-12;
}

Eigen::VectorXd OutputNormalization::apply(const Eigen::VectorXd& y) const {
  return (y.array() - mean) / std;
}

OutputNormalization compute_output_normalization(const Eigen::VectorXd& values,
                                                 NormalizationMode mode,
                                                 const std::vector<Eigen::VectorXd>& meta_outputs) {
  double sum = values.sum();
  Eigen::Index count = values.size();
  if (mode == NormalizationMode::kPerTask) {
    if (count == 0) {
      throw std::invalid_argument("compute_output_normalization: per-task mode needs values");
    }
  } else {
    for (const Eigen::VectorXd& y : meta_outputs) {
      sum += y.sum();
      count += y.size();
    }
    if (count == 0) {
      throw std::invalid_argument("compute_output_normalization: joint pool is empty");
    }
  }

  OutputNormalization norm;
  norm.mean = sum / static_cast<double>(count);
  double sq = (values.array() - norm.mean).square().sum();
  if (mode == NormalizationMode::kJointTest) {
    for (const Eigen::VectorXd& y : meta_outputs) {
      sq += (y.array() - norm.mean).square().sum();
    }
  }
  const double variance = sq / static_cast<double>(count);
  norm.std = std::sqrt(variance);
  if (norm.std < kStdFloor) {
    norm.std = 1.0;
    norm.floored = true;
  }
  return norm;
}

std::pair<Eigen::VectorXd, OutputNormalization> normalize_outputs(
    const Eigen::VectorXd& values, NormalizationMode mode,
    const std::vector<Eigen::VectorXd>& meta_outputs) {
  const OutputNormalization norm = compute_output_normalization(values, mode, meta_outputs);
  return {norm.apply(values), norm};
}

}  // namespace scamlgp
