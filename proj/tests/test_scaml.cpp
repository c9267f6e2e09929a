#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "scamlgp/errors.hpp"
#include "scamlgp/linalg.hpp"
#include "scamlgp/scaml.hpp"

using namespace scamlgp;

namespace {

KernelParams make_params(const Eigen::VectorXd& lengthscales, double outputscale) {
  KernelParams p;
  p.lengthscales = lengthscales;
  p.outputscale = outputscale;
  return p;
}

Eigen::MatrixXd random_points(Rng& rng, Eigen::Index n, Eigen::Index d) {
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.uniform();
  }
  return X;
}

Eigen::VectorXd random_outputs(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = rng.normal();
  return y;
}

// Fixed-hyperparameter model over random meta datasets.
struct Setup {
  MetaModel model;
  std::vector<DataSet> meta_data;
};

Setup make_setup(Rng& rng, int num_meta, Eigen::Index d, Eigen::Index points_per_task) {
  Setup s;
  s.model.weights.values.resize(num_meta);
  for (int m = 0; m < num_meta; ++m) {
    DataSet data(random_points(rng, points_per_task, d), random_outputs(rng, points_per_task));
    Eigen::VectorXd ls(d);
    for (Eigen::Index j = 0; j < d; ++j) ls(j) = rng.uniform(0.3, 1.2);
    s.model.meta_gps.push_back(
        condition_gp(data, make_params(ls, rng.uniform(0.5, 2.0)), NoiseParams{1e-3}));
    s.meta_data.push_back(std::move(data));
    s.model.weights.values(m) = rng.uniform(0.2, 1.8);
  }
  Eigen::VectorXd ls(d);
  for (Eigen::Index j = 0; j < d; ++j) ls(j) = rng.uniform(0.3, 1.2);
  s.model.test_kernel = make_params(ls, rng.uniform(0.5, 2.0));
  s.model.test_noise = NoiseParams{1e-3};
  return s;
}

}  // namespace

TEST_CASE("coreg_matrix worked example for one meta task") {
  const double w = 0.6;
  const Eigen::MatrixXd W1 = coreg_matrix(1, w, 1);
  REQUIRE(W1.rows() == 2);
  CHECK(W1(0, 0) == doctest::Approx(1.0));
  CHECK(W1(0, 1) == doctest::Approx(w));
  CHECK(W1(1, 0) == doctest::Approx(w));
  CHECK(W1(1, 1) == doctest::Approx(w * w));

  const Eigen::MatrixXd Wt = coreg_matrix(2, 0.0, 1);  // the test task's own latent
  CHECK(Wt(0, 0) == doctest::Approx(0.0));
  CHECK(Wt(0, 1) == doctest::Approx(0.0));
  CHECK(Wt(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("coreg_matrix is PSD for any weight sign") {
  Rng rng(131);
  for (int i = 0; i < 100; ++i) {
    const int num_meta = 1 + rng.uniform_int(5);
    const int task = 1 + rng.uniform_int(num_meta + 1);
    const Eigen::MatrixXd W = coreg_matrix(task, rng.uniform(-3.0, 3.0), num_meta);
    REQUIRE(W.rows() == num_meta + 1);
    CHECK(min_eigenvalue(W) >= -1e-10);
  }
  CHECK_THROWS_AS((void)coreg_matrix(0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)coreg_matrix(4, 1.0, 2), std::invalid_argument);
}

TEST_CASE("joint_kernel case table") {
  Rng rng(137);
  const Setup s = make_setup(rng, 3, 2, 4);
  const Eigen::VectorXd x = random_points(rng, 1, 2).row(0).transpose();
  const Eigen::VectorXd x2 = random_points(rng, 1, 2).row(0).transpose();
  const int test = 4;

  // Distinct meta tasks never covary.
  CHECK(joint_kernel(x, 1, x2, 2, s.model) == doctest::Approx(0.0));
  // Same meta task: its own SE kernel.
  CHECK(joint_kernel(x, 2, x2, 2, s.model) ==
        doctest::Approx(se_ard(x, x2, s.model.meta_gps[1].kernel)).epsilon(1e-14));
  // Meta/test cross term scales by the weight, symmetrically.
  const double w3 = s.model.weights.values(2);
  CHECK(joint_kernel(x, 3, x2, test, s.model) ==
        doctest::Approx(w3 * se_ard(x, x2, s.model.meta_gps[2].kernel)).epsilon(1e-14));
  CHECK(joint_kernel(x, test, x2, 3, s.model) ==
        doctest::Approx(joint_kernel(x2, 3, x, test, s.model)).epsilon(1e-14));
  // Test/test: residual kernel plus the weighted sum over meta kernels.
  double expected = se_ard(x, x2, s.model.test_kernel);
  for (int m = 0; m < 3; ++m) {
    const double w = s.model.weights.values(m);
    expected += w * w * se_ard(x, x2, s.model.meta_gps[static_cast<std::size_t>(m)].kernel);
  }
  CHECK(joint_kernel(x, test, x2, test, s.model) == doctest::Approx(expected).epsilon(1e-14));

  CHECK_THROWS_AS((void)joint_kernel(x, 0, x2, 1, s.model), std::invalid_argument);
  CHECK_THROWS_AS((void)joint_kernel(x, 5, x2, 1, s.model), std::invalid_argument);
}

TEST_CASE("meta_task_rng depends on content, not position") {
  Rng base(7);
  Eigen::MatrixXd X(2, 1);
  X << 0.1, 0.9;
  Eigen::VectorXd y(2);
  y << 1.0, -1.0;
  const DataSet a(X, y);
  const DataSet b(X, y);
  CHECK(meta_task_rng(base, a).next_u64() == meta_task_rng(base, b).next_u64());

  Eigen::VectorXd y2 = y;
  y2(1) = -1.0000001;
  CHECK(meta_task_rng(base, a).next_u64() != meta_task_rng(base, DataSet(X, y2)).next_u64());
  CHECK(meta_task_rng(Rng(8), a).next_u64() != meta_task_rng(base, a).next_u64());
}

TEST_CASE("fit_meta_tasks with one task equals fit_map under the derived stream") {
  Rng data_rng(139);
  DataSet data(random_points(data_rng, 10, 2), random_outputs(data_rng, 10));
  const GpHyperPriors priors = GpHyperPriors::defaults();

  const Rng base(3);
  const std::vector<FittedGP> fits = fit_meta_tasks({data}, priors, 3, base);
  REQUIRE(fits.size() == 1);

  Rng derived = meta_task_rng(base, data);
  const FittedGP direct = fit_map(data, priors, {}, 3, derived);
  CHECK((fits[0].kernel.lengthscales - direct.kernel.lengthscales).norm() == 0.0);
  CHECK(fits[0].kernel.outputscale == direct.kernel.outputscale);
  CHECK(fits[0].noise.noise_variance == direct.noise.noise_variance);
}

TEST_CASE("task order cannot change meta fits") {
  Rng data_rng(149);
  std::vector<DataSet> tasks;
  for (int m = 0; m < 3; ++m) {
    tasks.emplace_back(random_points(data_rng, 8, 1), random_outputs(data_rng, 8));
  }
  const GpHyperPriors priors = GpHyperPriors::defaults();
  const Rng base(5);

  const std::vector<FittedGP> forward = fit_meta_tasks(tasks, priors, 2, base);
  std::vector<DataSet> reversed(tasks.rbegin(), tasks.rend());
  const std::vector<FittedGP> backward = fit_meta_tasks(reversed, priors, 2, base);

  for (int m = 0; m < 3; ++m) {
    const FittedGP& f = forward[static_cast<std::size_t>(m)];
    const FittedGP& b = backward[static_cast<std::size_t>(2 - m)];
    CHECK((f.kernel.lengthscales - b.kernel.lengthscales).norm() == 0.0);
    CHECK(f.kernel.outputscale == b.kernel.outputscale);
    CHECK(f.noise.noise_variance == b.noise.noise_variance);
  }
}

TEST_CASE("duplicated tasks get identical fits") {
  Rng data_rng(151);
  DataSet data(random_points(data_rng, 8, 1), random_outputs(data_rng, 8));
  const std::vector<FittedGP> fits =
      fit_meta_tasks({data, data}, GpHyperPriors::defaults(), 2, Rng(9));
  CHECK((fits[0].kernel.lengthscales - fits[1].kernel.lengthscales).norm() == 0.0);
  CHECK(fits[0].kernel.outputscale == fits[1].kernel.outputscale);
}

TEST_CASE("fit_meta_tasks validates its inputs") {
  Rng rng(157);
  DataSet good(random_points(rng, 4, 2), random_outputs(rng, 4));
  CHECK_THROWS_AS(
      (void)fit_meta_tasks({good, DataSet::empty(2)}, GpHyperPriors::defaults(), 2, Rng(1)),
      std::invalid_argument);
  DataSet other_dim(random_points(rng, 4, 3), random_outputs(rng, 4));
  CHECK_THROWS_AS(
      (void)fit_meta_tasks({good, other_dim}, GpHyperPriors::defaults(), 2, Rng(1)),
      std::invalid_argument);
}

TEST_CASE("posterior cache matches only its own inputs") {
  Rng rng(163);
  const Setup s = make_setup(rng, 2, 2, 5);
  const Eigen::MatrixXd X = random_points(rng, 4, 2);
  const PosteriorCache cache = build_posterior_cache(s.model, X);
  CHECK(cache.matches(X));
  Eigen::MatrixXd nudged = X;
  nudged(0, 0) += 1e-12;
  CHECK(!cache.matches(nudged));
  CHECK(!cache.matches(random_points(rng, 4, 2)));
  CHECK(!cache.matches(Eigen::MatrixXd(3, 2)));

  // Cached marginals equal each meta GP's own posterior.
  for (int m = 0; m < 2; ++m) {
    const Posterior direct = gp_posterior(s.model.meta_gps[static_cast<std::size_t>(m)], X);
    CHECK((cache.means[static_cast<std::size_t>(m)] - direct.mean).norm() <= 1e-12);
    CHECK((cache.covs[static_cast<std::size_t>(m)] - direct.cov).norm() <= 1e-12);
  }
}

TEST_CASE("test_prior composes the meta posteriors") {
  Rng rng(167);
  const Setup s = make_setup(rng, 3, 2, 6);
  const Eigen::MatrixXd X = random_points(rng, 5, 2);

  const Posterior prior = test_prior(s.model, nullptr, X);

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(5);
  Eigen::MatrixXd cov = kernel_matrix(X, s.model.test_kernel);
  for (int m = 0; m < 3; ++m) {
    const double w = s.model.weights.values(m);
    const Posterior post = gp_posterior(s.model.meta_gps[static_cast<std::size_t>(m)], X);
    mean += w * post.mean;
    cov += w * w * post.cov;
  }
  CHECK((prior.mean - mean).norm() <= 1e-12);
  CHECK((prior.cov - cov).norm() <= 1e-12);

  // The cached path agrees with the on-the-fly path.
  const PosteriorCache cache = build_posterior_cache(s.model, X);
  const Posterior cached = test_prior(s.model, &cache, X);
  CHECK((cached.mean - prior.mean).norm() == 0.0);
  CHECK((cached.cov - prior.cov).norm() == 0.0);

  CHECK_THROWS_AS((void)test_prior(s.model, &cache, random_points(rng, 5, 2)), StaleCacheError);
}

TEST_CASE("test_prior with no meta tasks is the bare residual prior") {
  Rng rng(173);
  Setup s = make_setup(rng, 0, 2, 0);
  const Eigen::MatrixXd X = random_points(rng, 4, 2);
  const Posterior prior = test_prior(s.model, nullptr, X);
  CHECK(prior.mean.norm() == doctest::Approx(0.0));
  CHECK((prior.cov - kernel_matrix(X, s.model.test_kernel)).norm() <= 1e-14);
}

TEST_CASE("zero weights silence the meta tasks' means and covariances") {
  Rng rng(179);
  Setup s = make_setup(rng, 2, 1, 5);
  s.model.weights.values.setZero();
  const Eigen::MatrixXd X = random_points(rng, 3, 1);
  const Posterior prior = test_prior(s.model, nullptr, X);
  CHECK(prior.mean.norm() == doctest::Approx(0.0));
  CHECK((prior.cov - kernel_matrix(X, s.model.test_kernel)).norm() <= 1e-14);
}

TEST_CASE("test likelihood is the Gaussian density under the test prior") {
  Rng rng(181);
  const Setup s = make_setup(rng, 2, 2, 6);
  const Eigen::Index n = 4;
  const DataSet data(random_points(rng, n, 2), random_outputs(rng, n));
  const PosteriorCache cache = build_posterior_cache(s.model, data.inputs);
  const TestTaskParams params{s.model.test_kernel, s.model.test_noise, s.model.weights};

  const double ll = test_task_log_likelihood(params, s.model, cache, data);

  const Posterior prior = test_prior(s.model, &cache, data.inputs);
  const Eigen::MatrixXd K =
      prior.cov + params.noise.noise_variance * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd r = data.outputs - prior.mean;
  const double oracle = -0.5 * r.dot(K.inverse() * r) - 0.5 * std::log(K.determinant()) -
                        0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
  CHECK(ll == doctest::Approx(oracle).epsilon(1e-10));

  CHECK_THROWS_AS(
      (void)test_task_log_likelihood(params, s.model, cache, DataSet::empty(2)),
      std::invalid_argument);
  const PosteriorCache stale = build_posterior_cache(s.model, random_points(rng, n, 2));
  CHECK_THROWS_AS((void)test_task_log_likelihood(params, s.model, stale, data),
                  StaleCacheError);
}

TEST_CASE("test_posterior equals the joint oracle") {
  Rng rng(191);
  for (int trial = 0; trial < 5; ++trial) {
    const int num_meta = 1 + trial % 3;
    const Setup s = make_setup(rng, num_meta, 2, 5);
    const DataSet data(random_points(rng, 3, 2), random_outputs(rng, 3));
    const Eigen::MatrixXd Xq = random_points(rng, 4, 2);
    const PosteriorCache cache = build_posterior_cache(s.model, data.inputs);
    const TestTaskParams params{s.model.test_kernel, s.model.test_noise, s.model.weights};

    const Posterior modular = test_posterior(s.model, cache, params, data, Xq);
    const OraclePosterior oracle = joint_mtgp_oracle(s.meta_data, data, s.model, Xq);

    CHECK((modular.mean - oracle.mean).norm() <= 1e-8 * std::max(1.0, oracle.mean.norm()));
    CHECK((modular.cov - oracle.cov).norm() <= 1e-8 * std::max(1.0, oracle.cov.norm()));
  }
}

TEST_CASE("with no test data the posterior is the prior") {
  Rng rng(193);
  const Setup s = make_setup(rng, 2, 1, 5);
  const Eigen::MatrixXd Xq = random_points(rng, 3, 1);
  const DataSet empty = DataSet::empty(1);
  const PosteriorCache cache = build_posterior_cache(s.model, empty.inputs);
  const TestTaskParams params{s.model.test_kernel, s.model.test_noise, s.model.weights};
  const Posterior post = test_posterior(s.model, cache, params, empty, Xq);
  const Posterior prior = test_prior(s.model, nullptr, Xq);
  CHECK((post.mean - prior.mean).norm() <= 1e-12);
  CHECK((post.cov - prior.cov).norm() <= 1e-12);
}

TEST_CASE("no meta tasks reduces to a plain GP") {
  Rng rng(197);
  Setup s = make_setup(rng, 0, 2, 0);
  const DataSet data(random_points(rng, 5, 2), random_outputs(rng, 5));
  const Eigen::MatrixXd Xq = random_points(rng, 3, 2);
  const PosteriorCache cache = build_posterior_cache(s.model, data.inputs);
  const TestTaskParams params{s.model.test_kernel, s.model.test_noise, s.model.weights};

  const Posterior meta_free = test_posterior(s.model, cache, params, data, Xq);
  const FittedGP plain = condition_gp(data, s.model.test_kernel, s.model.test_noise);
  const Posterior direct = gp_posterior(plain, Xq);
  CHECK((meta_free.mean - direct.mean).norm() <= 1e-9);
  CHECK((meta_free.cov - direct.cov).norm() <= 1e-9);
}

TEST_CASE("oracle joint likelihood with no meta tasks is the plain lml") {
  Rng rng(199);
  Setup s = make_setup(rng, 0, 1, 0);
  const DataSet data(random_points(rng, 4, 1), random_outputs(rng, 4));
  const OraclePosterior oracle =
      joint_mtgp_oracle({}, data, s.model, Eigen::MatrixXd(0, 1));
  CHECK(oracle.joint_log_lik ==
        doctest::Approx(log_marginal_likelihood(s.model.test_kernel, s.model.test_noise, data))
            .epsilon(1e-10));
}

TEST_CASE("oracle refuses oversized problems") {
  Rng rng(211);
  Setup s = make_setup(rng, 1, 1, 400);
  const DataSet data(random_points(rng, 200, 1), random_outputs(rng, 200));
  CHECK_THROWS_AS((void)joint_mtgp_oracle(s.meta_data, data, s.model, Eigen::MatrixXd(0, 1)),
                  ResourceLimitError);
}

TEST_CASE("prediction state matches the full posterior diagonal") {
  Rng rng(223);
  const Setup s = make_setup(rng, 3, 2, 6);
  const DataSet data(random_points(rng, 5, 2), random_outputs(rng, 5));
  const Eigen::MatrixXd Xq = random_points(rng, 7, 2);
  const PosteriorCache cache = build_posterior_cache(s.model, data.inputs);
  const TestTaskParams params{s.model.test_kernel, s.model.test_noise, s.model.weights};

  const TestPosteriorState state(s.model, cache, params, data);
  const Marginals marg = state.predict(Xq);
  const Posterior full = test_posterior(s.model, cache, params, data, Xq);

  CHECK((marg.mean - full.mean).norm() <= 1e-9);
  CHECK((marg.var - full.cov.diagonal()).norm() <= 1e-9);
  for (Eigen::Index i = 0; i < marg.var.size(); ++i) CHECK(marg.var(i) >= 0.0);
}

TEST_CASE("fit_test_hypers bootstrap and determinism") {
  Rng rng(227);
  const Setup s = make_setup(rng, 2, 1, 6);
  const DataSet empty = DataSet::empty(1);
  const PosteriorCache cache = build_posterior_cache(s.model, empty.inputs);
  const TestTaskPriors priors = TestTaskPriors::defaults();

  Rng fit_rng(31);
  const TestTaskParams boot = fit_test_hypers(s.model, cache, empty, priors, 3, fit_rng);
  CHECK((boot.weights.values - Eigen::VectorXd::Ones(2)).norm() == 0.0);
  CHECK(boot.kernel.lengthscales(0) == doctest::Approx(priors.gp.lengthscale.median_clipped()));
  CHECK(boot.noise.noise_variance == doctest::Approx(priors.gp.noise.median_clipped()));

  const DataSet data(random_points(rng, 8, 1), random_outputs(rng, 8));
  const PosteriorCache cache2 = build_posterior_cache(s.model, data.inputs);
  Rng f1(33), f2(33);
  const TestTaskParams a = fit_test_hypers(s.model, cache2, data, priors, 3, f1);
  const TestTaskParams b = fit_test_hypers(s.model, cache2, data, priors, 3, f2);
  CHECK((a.weights.values - b.weights.values).norm() == 0.0);
  CHECK(a.kernel.outputscale == b.kernel.outputscale);
  CHECK(a.noise.noise_variance == b.noise.noise_variance);
  for (Eigen::Index m = 0; m < a.weights.size(); ++m) CHECK(a.weights.values(m) > 0.0);
}

TEST_CASE("weights discover which meta task explains the test data") {
  // Meta task 1 is the test function itself; meta task 2 is unrelated. The
  // fitted weight on task 1 should dominate the weight on task 2 on average.
  double w_related = 0.0, w_unrelated = 0.0;
  const int trials = 6;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(300 + trial);
    const Eigen::Index d = 1;
    auto f = [](double x) { return std::sin(5.0 * x); };

    const Eigen::MatrixXd X1 = random_points(rng, 24, d);
    Eigen::VectorXd y1(24);
    for (Eigen::Index i = 0; i < 24; ++i) y1(i) = f(X1(i, 0)) + 0.05 * rng.normal();
    const Eigen::MatrixXd X2 = random_points(rng, 24, d);
    const Eigen::VectorXd y2 = random_outputs(rng, 24);  // pure noise task

    const Rng base(40 + trial);
    const std::vector<DataSet> meta = {DataSet(X1, y1), DataSet(X2, y2)};
    MetaModel model;
    model.meta_gps = fit_meta_tasks(meta, GpHyperPriors::defaults(), 3, base);
    model.weights.values = Eigen::VectorXd::Ones(2);
    model.test_kernel = make_params(Eigen::VectorXd::Constant(d, 0.5), 0.1);
    model.test_noise = NoiseParams{1e-4};

    const Eigen::MatrixXd Xt = random_points(rng, 12, d);
    Eigen::VectorXd yt(12);
    for (Eigen::Index i = 0; i < 12; ++i) yt(i) = f(Xt(i, 0)) + 0.05 * rng.normal();
    const DataSet test_data(Xt, yt);

    const PosteriorCache cache = build_posterior_cache(model, Xt);
    Rng fit_rng(50 + trial);
    const TestTaskParams params =
        fit_test_hypers(model, cache, test_data, TestTaskPriors::defaults(), 5, fit_rng);
    w_related += params.weights.values(0) / trials;
    w_unrelated += params.weights.values(1) / trials;
  }
  CHECK(w_related > 0.5);
  CHECK(w_related > w_unrelated);
}
