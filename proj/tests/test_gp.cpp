#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "scamlgp/gp.hpp"
#include "scamlgp/rng.hpp"

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

}  // namespace

TEST_CASE("DataSet validates and appends") {
  CHECK_THROWS_AS(DataSet(Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Zero(2)),
                  std::invalid_argument);
  DataSet d = DataSet::empty(2);
  CHECK(d.size() == 0);
  CHECK(d.dim() == 2);
  Eigen::VectorXd x(2);
  x << 0.1, 0.9;
  d.append(x, 1.5);
  d.append(x, -0.5);
  CHECK(d.size() == 2);
  CHECK(d.outputs(1) == doctest::Approx(-0.5));
  CHECK(d.inputs(0, 1) == doctest::Approx(0.9));
}

TEST_CASE("eval_mean: empty function is the zero mean") {
  const Eigen::MatrixXd X = Eigen::MatrixXd::Random(4, 2);
  CHECK(eval_mean(MeanFn{}, X).norm() == doctest::Approx(0.0));
  const MeanFn ones = [](const Eigen::MatrixXd& Xq) {
    return Eigen::VectorXd::Constant(Xq.rows(), 2.0);
  };
  CHECK(eval_mean(ones, X)(2) == doctest::Approx(2.0));
}

TEST_CASE("empty-data posterior is the prior") {
  const KernelParams p = make_params(Eigen::VectorXd::Ones(2), 1.7);
  const FittedGP gp = condition_gp(DataSet::empty(2), p, NoiseParams{1e-4});
  Rng rng(71);
  const Eigen::MatrixXd Xq = random_points(rng, 5, 2);
  const Posterior post = gp_posterior(gp, Xq);
  CHECK(post.mean.norm() == doctest::Approx(0.0));
  CHECK((post.cov - kernel_matrix(Xq, p)).norm() <= 1e-12);

  const MeanFn mean_fn = [](const Eigen::MatrixXd& X) {
    return Eigen::VectorXd(X.rowwise().sum());
  };
  const FittedGP gp_mean = condition_gp(DataSet::empty(2), p, NoiseParams{1e-4}, mean_fn);
  const Posterior post_mean = gp_posterior(gp_mean, Xq);
  CHECK((post_mean.mean - Xq.rowwise().sum()).norm() <= 1e-12);
}

TEST_CASE("single point near-interpolation") {
  Eigen::MatrixXd X(1, 1);
  X << 0.4;
  Eigen::VectorXd y(1);
  y << 2.5;
  const KernelParams p = make_params(Eigen::VectorXd::Ones(1), 1.0);
  const FittedGP gp = condition_gp(DataSet(X, y), p, NoiseParams{1e-8});
  const Posterior post = gp_posterior(gp, X);
  CHECK(post.mean(0) == doctest::Approx(2.5).epsilon(1e-3));
  CHECK(post.cov(0, 0) <= 1e-3 * p.outputscale);
  CHECK(post.cov(0, 0) >= 0.0);
}

TEST_CASE("posterior matches the dense-inverse oracle") {
  Rng rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 3, q = 4, d = 2;
    const Eigen::MatrixXd X = random_points(rng, n, d);
    const Eigen::VectorXd y = random_outputs(rng, n);
    const Eigen::MatrixXd Xq = random_points(rng, q, d);
    Eigen::VectorXd ls(d);
    ls << rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.5);
    const KernelParams p = make_params(ls, rng.uniform(0.5, 2.0));
    const NoiseParams noise{rng.uniform(1e-4, 1e-2)};

    const FittedGP gp = condition_gp(DataSet(X, y), p, noise);
    const Posterior post = gp_posterior(gp, Xq);

    const Eigen::MatrixXd K =
        kernel_matrix(X, p) + noise.noise_variance * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd K_inv = K.inverse();
    const Eigen::MatrixXd Kqx = kernel_matrix(Xq, X, p);
    const Eigen::VectorXd mean_oracle = Kqx * K_inv * y;
    const Eigen::MatrixXd cov_oracle = kernel_matrix(Xq, p) - Kqx * K_inv * Kqx.transpose();

    CHECK((post.mean - mean_oracle).norm() <= 1e-10 * std::max(1.0, mean_oracle.norm()));
    CHECK((post.cov - cov_oracle).norm() <= 1e-10 * std::max(1.0, cov_oracle.norm()));

    const Marginals marg = gp_posterior_marginals(gp, Xq);
    CHECK((marg.mean - post.mean).norm() <= 1e-12);
    CHECK((marg.var - post.cov.diagonal()).norm() <= 1e-10);
  }
}

TEST_CASE("posterior variance never exceeds the prior variance") {
  Rng rng(79);
  const Eigen::MatrixXd X = random_points(rng, 6, 2);
  const Eigen::VectorXd y = random_outputs(rng, 6);
  const KernelParams p = make_params(Eigen::VectorXd::Constant(2, 0.5), 2.0);
  const FittedGP gp = condition_gp(DataSet(X, y), p, NoiseParams{1e-3});
  const Marginals marg = gp_posterior_marginals(gp, random_points(rng, 50, 2));
  for (Eigen::Index i = 0; i < 50; ++i) {
    CHECK(marg.var(i) <= p.outputscale + 1e-10);
    CHECK(marg.var(i) >= 0.0);
  }
}

TEST_CASE("log marginal likelihood closed-form scalars") {
  Eigen::MatrixXd X(1, 1);
  X << 0.3;

  Eigen::VectorXd y0(1);
  y0 << 0.0;
  const KernelParams p1 = make_params(Eigen::VectorXd::Ones(1), 0.9);
  CHECK(log_marginal_likelihood(p1, NoiseParams{0.1}, DataSet(X, y0)) ==
        doctest::Approx(-0.91894).epsilon(1e-4));

  Eigen::VectorXd y2(1);
  y2 << 2.0;
  const KernelParams p2 = make_params(Eigen::VectorXd::Ones(1), 3.9);
  CHECK(log_marginal_likelihood(p2, NoiseParams{0.1}, DataSet(X, y2)) ==
        doctest::Approx(-2.11209).epsilon(1e-4));

  CHECK_THROWS_AS(
      (void)log_marginal_likelihood(p1, NoiseParams{0.1}, DataSet::empty(1)),
      std::invalid_argument);
}

TEST_CASE("log marginal likelihood matches the dense oracle") {
  Rng rng(83);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 3;
    const Eigen::MatrixXd X = random_points(rng, n, 2);
    const Eigen::VectorXd y = random_outputs(rng, n);
    const KernelParams p =
        make_params(Eigen::VectorXd::Constant(2, rng.uniform(0.3, 1.2)), rng.uniform(0.5, 2.0));
    const NoiseParams noise{rng.uniform(1e-3, 1e-2)};

    const Eigen::MatrixXd K =
        kernel_matrix(X, p) + noise.noise_variance * Eigen::MatrixXd::Identity(n, n);
    const double oracle = -0.5 * y.dot(K.inverse() * y) - 0.5 * std::log(K.determinant()) -
                          0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
    CHECK(log_marginal_likelihood(p, noise, DataSet(X, y)) ==
          doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("prior mean enters the likelihood through the residual") {
  Rng rng(89);
  const Eigen::MatrixXd X = random_points(rng, 4, 1);
  const Eigen::VectorXd y = random_outputs(rng, 4);
  const KernelParams p = make_params(Eigen::VectorXd::Ones(1), 1.0);
  const NoiseParams noise{1e-2};
  const MeanFn shift = [](const Eigen::MatrixXd& Xq) {
    return Eigen::VectorXd::Constant(Xq.rows(), 1.5);
  };
  const Eigen::VectorXd shifted = y.array() - 1.5;
  CHECK(log_marginal_likelihood(p, noise, DataSet(X, y), shift) ==
        doctest::Approx(log_marginal_likelihood(p, noise, DataSet(X, shifted))).epsilon(1e-12));
}

TEST_CASE("lml gradient agrees with central differences") {
  Rng rng(97);
  const Eigen::Index d = 2, n = 6;
  const Eigen::MatrixXd X = random_points(rng, n, d);
  const Eigen::VectorXd y = random_outputs(rng, n);
  Eigen::VectorXd ls(d);
  ls << 0.6, 1.1;
  const KernelParams p = make_params(ls, 1.4);
  const NoiseParams noise{3e-3};
  const DataSet data(X, y);

  const Eigen::VectorXd g = lml_gradient(p, noise, data);
  REQUIRE(g.size() == d + 2);
  const double h = 1e-5;
  auto eval = [&](Eigen::Index idx, double delta) {
    KernelParams kp = p;
    NoiseParams np = noise;
    if (idx < d) kp.lengthscales(idx) *= std::exp(delta);
    else if (idx == d) kp.outputscale *= std::exp(delta);
    else np.noise_variance *= std::exp(delta);
    return log_marginal_likelihood(kp, np, data);
  };
  for (Eigen::Index idx = 0; idx < d + 2; ++idx) {
    const double fd = (eval(idx, h) - eval(idx, -h)) / (2.0 * h);
    CHECK(g(idx) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("swap-symmetric data gives equal lengthscale gradients") {
  Eigen::MatrixXd X(3, 2);
  X << 0.2, 0.8, 0.8, 0.2, 0.5, 0.5;
  Eigen::VectorXd y(3);
  y << 1.0, 1.0, -0.4;
  const KernelParams p = make_params(Eigen::VectorXd::Constant(2, 0.7), 1.2);
  const Eigen::VectorXd g = lml_gradient(p, NoiseParams{1e-3}, DataSet(X, y));
  CHECK(g(0) == doctest::Approx(g(1)).epsilon(1e-12));
}

TEST_CASE("map objective composes lml and prior densities") {
  Rng rng(101);
  const Eigen::MatrixXd X = random_points(rng, 5, 2);
  const Eigen::VectorXd y = random_outputs(rng, 5);
  const DataSet data(X, y);
  Eigen::VectorXd ls(2);
  ls << 0.5, 0.9;
  const KernelParams p = make_params(ls, 1.1);
  const NoiseParams noise{1e-3};

  const double lml = log_marginal_likelihood(p, noise, data);
  CHECK(log_map_objective(p, noise, data, GpHyperPriors::flat()) ==
        doctest::Approx(lml).epsilon(1e-12));

  const GpHyperPriors priors = GpHyperPriors::defaults();
  double expected = lml;
  expected += priors.lengthscale.dist.log_pdf(0.5) + priors.lengthscale.dist.log_pdf(0.9);
  expected += priors.outputscale.dist.log_pdf(1.1);
  expected += priors.noise.dist.log_pdf(1e-3);
  CHECK(log_map_objective(p, noise, data, priors) == doctest::Approx(expected).epsilon(1e-12));

  KernelParams outside = p;
  outside.outputscale = 1e6;  // beyond the box
  CHECK_THROWS_AS((void)log_map_objective(outside, noise, data, priors), std::invalid_argument);
}

TEST_CASE("fit_map on empty data returns the prior-median GP") {
  Rng rng(103);
  const GpHyperPriors priors = GpHyperPriors::defaults();
  const FittedGP gp = fit_map(DataSet::empty(2), priors, {}, 5, rng);
  CHECK(gp.size() == 0);
  for (Eigen::Index j = 0; j < 2; ++j) {
    CHECK(gp.kernel.lengthscales(j) == doctest::Approx(priors.lengthscale.median_clipped()));
  }
  CHECK(gp.kernel.outputscale == doctest::Approx(priors.outputscale.median_clipped()));
  CHECK(gp.noise.noise_variance == doctest::Approx(priors.noise.median_clipped()));
}

TEST_CASE("fit_map is deterministic given the rng seed") {
  Rng data_rng(107);
  const Eigen::MatrixXd X = random_points(data_rng, 10, 2);
  const Eigen::VectorXd y = random_outputs(data_rng, 10);

  Rng fit1(5), fit2(5);
  const FittedGP a = fit_map(DataSet(X, y), GpHyperPriors::defaults(), {}, 3, fit1);
  const FittedGP b = fit_map(DataSet(X, y), GpHyperPriors::defaults(), {}, 3, fit2);
  CHECK((a.kernel.lengthscales - b.kernel.lengthscales).norm() == 0.0);
  CHECK(a.kernel.outputscale == b.kernel.outputscale);
  CHECK(a.noise.noise_variance == b.noise.noise_variance);
}

TEST_CASE("fit_map beats fresh prior draws and sits at a stationary point") {
  Rng data_rng(109);
  const Eigen::Index n = 16;
  const Eigen::MatrixXd X = random_points(data_rng, n, 1);
  // Smooth target with mild noise so the fit is well posed.
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = std::sin(4.0 * X(i, 0)) + 0.05 * data_rng.normal();
  }
  const DataSet data(X, y);
  const GpHyperPriors priors = GpHyperPriors::defaults();

  Rng fit_rng(11);
  const FittedGP gp = fit_map(data, priors, {}, 5, fit_rng);
  const double fitted = log_map_objective(gp.kernel, gp.noise, data, priors);

  Rng probe(13);
  for (int i = 0; i < 5; ++i) {
    KernelParams kp;
    kp.lengthscales = Eigen::VectorXd::Constant(1, priors.lengthscale.sample_clipped(probe));
    kp.outputscale = priors.outputscale.sample_clipped(probe);
    const NoiseParams np{priors.noise.sample_clipped(probe)};
    CHECK(fitted >= log_map_objective(kp, np, data, priors) - 1e-9);
  }

  // Stationarity in log space unless a box face is active.
  const Eigen::VectorXd g_lml = lml_gradient(gp.kernel, gp.noise, data);
  Eigen::VectorXd g_map = g_lml;
  g_map(0) += priors.lengthscale.dist.dlogpdf_dlogx(gp.kernel.lengthscales(0));
  g_map(1) += priors.outputscale.dist.dlogpdf_dlogx(gp.kernel.outputscale);
  g_map(2) += priors.noise.dist.dlogpdf_dlogx(gp.noise.noise_variance);

  auto near_box = [](double v, const HyperPrior& hp) {
    return v <= hp.lower * (1.0 + 1e-9) || v >= hp.upper * (1.0 - 1e-9);
  };
  const bool active = near_box(gp.kernel.lengthscales(0), priors.lengthscale) ||
                      near_box(gp.kernel.outputscale, priors.outputscale) ||
                      near_box(gp.noise.noise_variance, priors.noise);
  if (!active) CHECK(g_map.lpNorm<Eigen::Infinity>() <= 1e-4);
}

TEST_CASE("fitted gp reproduces noisy observations closely") {
  Rng rng(113);
  const Eigen::Index n = 12;
  const Eigen::MatrixXd X = random_points(rng, n, 1);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = std::cos(3.0 * X(i, 0));
  Rng fit_rng(17);
  const FittedGP gp = fit_map(DataSet(X, y), GpHyperPriors::defaults(), {}, 5, fit_rng);
  const Marginals marg = gp_posterior_marginals(gp, X);
  for (Eigen::Index i = 0; i < n; ++i) {
    CHECK(marg.mean(i) == doctest::Approx(y(i)).epsilon(0.15));
  }
}
