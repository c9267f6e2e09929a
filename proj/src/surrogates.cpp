#include "scamlgp/surrogates.hpp"

#include <stdexcept>
#include <utility>

namespace scamlgp {

GpSurrogate::GpSurrogate(Eigen::Index dim, GpHyperPriors priors, int restarts)
    : dim_(dim), priors_(std::move(priors)), restarts_(restarts) {
  if (dim < 1) throw std::invalid_argument("GpSurrogate: dim must be >= 1");
  if (restarts < 1) throw std::invalid_argument("GpSurrogate: restarts must be >= 1");
}

void GpSurrogate::refit(const DataSet& test_data, Rng& rng) {
  if (test_data.size() == 0) {
    norm_ = OutputNormalization{};
    gp_ = fit_map(DataSet::empty(dim_), priors_, {}, restarts_, rng);
  } else {
    if (test_data.dim() != dim_) throw std::invalid_argument("GpSurrogate: dimension mismatch");
    auto [normalized, norm] = normalize_outputs(test_data.outputs, NormalizationMode::kPerTask);
    norm_ = norm;
    gp_ = fit_map(DataSet(test_data.inputs, std::move(normalized)), priors_, {}, restarts_, rng);
  }
  fitted_ = true;
}

Marginals GpSurrogate::evaluate(const Eigen::MatrixXd& Xq) const {
  if (!fitted_) throw std::logic_error("GpSurrogate: evaluate before refit");
  return gp_posterior_marginals(gp_, Xq);
}

Marginals GpSurrogate::evaluate_native(const Eigen::MatrixXd& Xq) const {
  Marginals marg = evaluate(Xq);
  for (Eigen::Index i = 0; i < marg.mean.size(); ++i) {
    marg.mean[i] = norm_.invert(marg.mean[i]);
    marg.var[i] = norm_.invert_variance(marg.var[i]);
  }
  return marg;
}

ScamlSurrogate::ScamlSurrogate(Eigen::Index dim, const std::vector<DataSet>& meta_data_raw,
                               const GpHyperPriors& meta_priors, TestTaskPriors test_priors,
                               int restarts, bool warm_start_weights, Rng& rng)
    : test_priors_(std::move(test_priors)),
      restarts_(restarts),
      warm_start_weights_(warm_start_weights) {
  if (dim < 1) throw std::invalid_argument("ScamlSurrogate: dim must be >= 1");
  if (restarts < 1) throw std::invalid_argument("ScamlSurrogate: restarts must be >= 1");

  std::vector<DataSet> normalized;
  normalized.reserve(meta_data_raw.size());
  raw_meta_outputs_.reserve(meta_data_raw.size());
  for (const DataSet& data : meta_data_raw) {
    if (data.dim() != dim) {
      throw std::invalid_argument("ScamlSurrogate: meta task dimension mismatch");
    }
    raw_meta_outputs_.push_back(data.outputs);
    auto [values, norm] = normalize_outputs(data.outputs, NormalizationMode::kPerTask);
    normalized.emplace_back(data.inputs, std::move(values));
  }
  model_.meta_gps = fit_meta_tasks(normalized, meta_priors, restarts_, rng);
  model_.weights.values = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(normalized.size()));
  model_.test_kernel.lengthscales =
      Eigen::VectorXd::Constant(dim, test_priors_.gp.lengthscale.median_clipped());
  model_.test_kernel.outputscale = test_priors_.gp.outputscale.median_clipped();
  model_.test_noise.noise_variance = test_priors_.gp.noise.median_clipped();
}

void ScamlSurrogate::refit(const DataSet& test_data, Rng& rng) {
  if (test_data.size() > 0 && test_data.dim() != model_.dim()) {
    throw std::invalid_argument("ScamlSurrogate: dimension mismatch");
  }
  // Joint scale: the test outputs pooled with the raw meta outputs, so the
  // normalized test values stay commensurate with the meta posteriors.
  joint_norm_ = compute_output_normalization(test_data.outputs, NormalizationMode::kJointTest,
                                             raw_meta_outputs_);
  Eigen::MatrixXd inputs =
      test_data.size() > 0 ? test_data.inputs : Eigen::MatrixXd(0, model_.dim());
  DataSet normalized(std::move(inputs), joint_norm_.apply(test_data.outputs));

  cache_ = build_posterior_cache(model_, normalized.inputs);
  const TestTaskParams params =
      fit_test_hypers(model_, cache_, normalized, test_priors_, restarts_, rng,
                      (warm_start_weights_ && have_previous_) ? &previous_ : nullptr);
  previous_ = params;
  have_previous_ = true;
  model_.weights = params.weights;
  model_.test_kernel = params.kernel;
  model_.test_noise = params.noise;
  state_.emplace(model_, cache_, params, std::move(normalized));
}

Marginals ScamlSurrogate::evaluate(const Eigen::MatrixXd& Xq) const {
  if (!state_.has_value()) throw std::logic_error("ScamlSurrogate: evaluate before refit");
  return state_->predict(Xq);
}

Marginals ScamlSurrogate::evaluate_native(const Eigen::MatrixXd& Xq) const {
  Marginals marg = evaluate(Xq);
  for (Eigen::Index i = 0; i < marg.mean.size(); ++i) {
    marg.mean[i] = joint_norm_.invert(marg.mean[i]);
    marg.var[i] = joint_norm_.invert_variance(marg.var[i]);
  }
  return marg;
}

}  // namespace scamlgp
