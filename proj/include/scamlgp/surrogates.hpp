#pragma once

#include <optional>
#include <vector>

#include "scamlgp/bo.hpp"
#include "scamlgp/normalization.hpp"
#include "scamlgp/priors.hpp"
#include "scamlgp/scaml.hpp"

namespace scamlgp {

// Plain single-task GP baseline. Outputs are standardized per refit; the
// acquisition sees the normalized posterior (UCB's argmax is unchanged by
// the affine transform).
class GpSurrogate final : public SurrogateModel {
 public:
  GpSurrogate(Eigen::Index dim, GpHyperPriors priors, int restarts);

  void refit(const DataSet& test_data, Rng& rng) override;
  Marginals evaluate(const Eigen::MatrixXd& Xq) const override;
  // Posterior in native output units, for reporting.
  Marginals evaluate_native(const Eigen::MatrixXd& Xq) const;

  const FittedGP& gp() const { return gp_; }
  const OutputNormalization& normalization() const { return norm_; }

 private:
  Eigen::Index dim_;
  GpHyperPriors priors_;
  int restarts_;
  FittedGP gp_;
  OutputNormalization norm_;
  bool fitted_ = false;
};

// Meta-learned surrogate: meta-task GPs are fit once on per-task-normalized
// outputs at construction; every refit renormalizes the test outputs against
// the joint pool, refits the test-task parameters, and rebuilds the
// prediction state.
class ScamlSurrogate final : public SurrogateModel {
 public:
  ScamlSurrogate(Eigen::Index dim, const std::vector<DataSet>& meta_data_raw,
                 const GpHyperPriors& meta_priors, TestTaskPriors test_priors, int restarts,
                 bool warm_start_weights, Rng& rng);

  void refit(const DataSet& test_data, Rng& rng) override;
  Marginals evaluate(const Eigen::MatrixXd& Xq) const override;
  Marginals evaluate_native(const Eigen::MatrixXd& Xq) const;

  const MetaModel& model() const { return model_; }
  const OutputNormalization& normalization() const { return joint_norm_; }

 private:
  TestTaskPriors test_priors_;
  int restarts_;
  bool warm_start_weights_;
  std::vector<Eigen::VectorXd> raw_meta_outputs_;  // joint-normalization pool
  MetaModel model_;
  PosteriorCache cache_;
  std::optional<TestPosteriorState> state_;
  OutputNormalization joint_norm_;
  bool have_previous_ = false;
  TestTaskParams previous_;
};

}  // namespace scamlgp
