#include <Eigen/Dense>
#include <stdexcept>

#include "doctest.h"
#include "scamlgp/kernel.hpp"
#include "scamlgp/linalg.hpp"
#include "scamlgp/rng.hpp"

using namespace scamlgp;

namespace {

KernelParams make_params(const Eigen::VectorXd& lengthscales, double outputscale) {
  KernelParams p;
  p.lengthscales = lengthscales;
  p.outputscale = outputscale;
  return p;
}

Eigen::MatrixXd random_points(Rng& rng, Eigen::Index n, Eigen::Index d, double lo, double hi) {
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.uniform(lo, hi);
  }
  return X;
}

}  // namespace

TEST_CASE("se_ard closed-form values") {
  const KernelParams p1 = make_params(Eigen::VectorXd::Ones(1), 1.0);
  Eigen::VectorXd x0(1), x1(1);
  x0 << 0.0;
  x1 << 1.0;
  CHECK(se_ard(x0, x1, p1) == doctest::Approx(0.60653).epsilon(1e-4));
  CHECK(se_ard(x0, x0, make_params(Eigen::VectorXd::Ones(1), 2.5)) == doctest::Approx(2.5));

  Eigen::VectorXd ls(2);
  ls << 1.0, 2.0;
  Eigen::VectorXd a(2), b(2);
  a << 0.0, 0.0;
  b << 1.0, 2.0;
  CHECK(se_ard(a, b, make_params(ls, 1.0)) == doctest::Approx(0.36788).epsilon(1e-4));
}

TEST_CASE("se_ard is symmetric and peaks at coincident points") {
  Rng rng(41);
  Eigen::VectorXd ls(3);
  ls << 0.4, 1.1, 2.5;
  const KernelParams p = make_params(ls, 1.7);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd x = random_points(rng, 1, 3, -2.0, 2.0).row(0).transpose();
    const Eigen::VectorXd y = random_points(rng, 1, 3, -2.0, 2.0).row(0).transpose();
    CHECK(se_ard(x, y, p) == doctest::Approx(se_ard(y, x, p)).epsilon(1e-15));
    CHECK(se_ard(x, y, p) <= p.outputscale);
    CHECK(se_ard(x, y, p) > 0.0);
  }
}

TEST_CASE("longer lengthscales damp a coordinate's influence") {
  Eigen::VectorXd ls(2);
  ls << 0.5, 5.0;
  const KernelParams p = make_params(ls, 1.0);
  Eigen::VectorXd x(2), step_short(2), step_long(2);
  x << 0.0, 0.0;
  step_short << 1.0, 0.0;
  step_long << 0.0, 1.0;
  CHECK(se_ard(x, step_short, p) < se_ard(x, step_long, p));
}

TEST_CASE("se_ard rejects dimension mismatches") {
  const KernelParams p = make_params(Eigen::VectorXd::Ones(2), 1.0);
  CHECK_THROWS_AS((void)se_ard(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3), p),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)se_ard(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3), p),
                  std::invalid_argument);
}

TEST_CASE("kernel_matrix equals the entrywise oracle loop") {
  Rng rng(43);
  const Eigen::MatrixXd X = random_points(rng, 3, 2, -1.0, 1.0);
  const Eigen::MatrixXd X2 = random_points(rng, 5, 2, -1.0, 1.0);
  Eigen::VectorXd ls(2);
  ls << 0.7, 1.3;
  const KernelParams p = make_params(ls, 2.0);

  const Eigen::MatrixXd K = kernel_matrix(X, X2, p);
  REQUIRE(K.rows() == 3);
  REQUIRE(K.cols() == 5);
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 5; ++j) {
      CHECK(K(i, j) ==
            doctest::Approx(se_ard(X.row(i).transpose(), X2.row(j).transpose(), p))
                .epsilon(1e-14));
    }
  }
}

TEST_CASE("self kernel matrix: exact diagonal, symmetry, duplicate rows") {
  Rng rng(47);
  const Eigen::MatrixXd X = random_points(rng, 6, 3, -2.0, 2.0);
  Eigen::VectorXd ls(3);
  ls << 0.5, 1.0, 1.5;
  const KernelParams p = make_params(ls, 3.25);

  const Eigen::MatrixXd K = kernel_matrix(X, p);
  CHECK((K - K.transpose()).norm() == doctest::Approx(0.0));
  for (Eigen::Index i = 0; i < 6; ++i) CHECK(K(i, i) == doctest::Approx(3.25));

  Eigen::MatrixXd dup(2, 1);
  dup << 0.3, 0.3;
  const Eigen::MatrixXd Kd = kernel_matrix(dup, make_params(Eigen::VectorXd::Ones(1), 2.5));
  CHECK(Kd(0, 1) == doctest::Approx(2.5));
  CHECK(Kd(1, 0) == doctest::Approx(2.5));

  Eigen::MatrixXd single(1, 1);
  single << 0.8;
  const Eigen::MatrixXd K1 = kernel_matrix(single, make_params(Eigen::VectorXd::Ones(1), 2.5));
  REQUIRE(K1.rows() == 1);
  CHECK(K1(0, 0) == doctest::Approx(2.5));
}

TEST_CASE("kernel matrices are positive semi-definite") {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 1 + rng.uniform_int(10);
    const Eigen::Index d = 1 + rng.uniform_int(3);
    const Eigen::MatrixXd X = random_points(rng, n, d, -3.0, 3.0);
    Eigen::VectorXd ls(d);
    for (Eigen::Index j = 0; j < d; ++j) ls(j) = rng.uniform(0.1, 2.0);
    const KernelParams p = make_params(ls, rng.uniform(0.1, 5.0));
    CHECK(min_eigenvalue(kernel_matrix(X, p)) >= -1e-10);
  }
}

TEST_CASE("kernel_matrix validates dimensions") {
  const KernelParams p = make_params(Eigen::VectorXd::Ones(2), 1.0);
  CHECK_THROWS_AS((void)kernel_matrix(Eigen::MatrixXd::Zero(3, 3), p), std::invalid_argument);
  CHECK_THROWS_AS(
      (void)kernel_matrix(Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(3, 1), p),
      std::invalid_argument);
}
