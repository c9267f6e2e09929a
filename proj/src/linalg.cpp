#include "scamlgp/linalg.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "scamlgp/errors.hpp"

namespace scamlgp {

CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("cholesky_with_jitter: matrix must be square");
  }
  if (!A.allFinite()) {
    throw std::invalid_argument("cholesky_with_jitter: matrix has non-finite entries");
  }
  if (A.rows() == 0) return CholeskyResult{Eigen::MatrixXd(0, 0), 0.0};

  static constexpr std::array<double, 5> kJitterLadder = {0.0, 1e-10, 1e-8, 1e-6, 1e-4};
  const Eigen::Index n = A.rows();
  for (const double jitter : kJitterLadder) {
    Eigen::MatrixXd work = A;
    if (jitter > 0.0) work.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd L = llt.matrixL();
      if (L.allFinite()) return CholeskyResult{std::move(L), jitter};
    }
  }
  throw NotPositiveDefiniteError(
      "cholesky_with_jitter: matrix of size " + std::to_string(n) +
          " is not positive definite at any jitter level up to 1e-4",
      kJitterLadder.back());
}

Eigen::VectorXd chol_solve(const Eigen::MatrixXd& L, const Eigen::VectorXd& b) {
  Eigen::VectorXd x = L.triangularView<Eigen::Lower>().solve(b);
  L.triangularView<Eigen::Lower>().transpose().solveInPlace(x);
  return x;
}

Eigen::MatrixXd chol_solve(const Eigen::MatrixXd& L, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd x = L.triangularView<Eigen::Lower>().solve(B);
  L.triangularView<Eigen::Lower>().transpose().solveInPlace(x);
  return x;
}

Eigen::MatrixXd tri_solve(const Eigen::MatrixXd& L, const Eigen::MatrixXd& B) {
  return L.triangularView<Eigen::Lower>().solve(B);
}

double chol_log_det(const Eigen::MatrixXd& L) {
  return 2.0 * L.diagonal().array().log().sum();
}

double min_eigenvalue(const Eigen::MatrixXd& A) {
  if (A.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("min_eigenvalue: eigendecomposition failed");
  }
  return solver.eigenvalues().minCoeff();
}

std::uint64_t hash_bytes(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t hash_matrix(const Eigen::MatrixXd& m, std::uint64_t seed) {
  std::uint64_t h = seed;
  const std::int64_t rows = m.rows();
  const std::int64_t cols = m.cols();
  h = hash_bytes(&rows, sizeof(rows), h);
  h = hash_bytes(&cols, sizeof(cols), h);
  if (m.size() > 0) {
    h = hash_bytes(m.data(), static_cast<std::size_t>(m.size()) * sizeof(double), h);
  }
  return h;
}

std::uint64_t hash_vector(const Eigen::VectorXd& v, std::uint64_t seed) {
  std::uint64_t h = seed;
  const std::int64_t n = v.size();
  h = hash_bytes(&n, sizeof(n), h);
  if (n > 0) h = hash_bytes(v.data(), static_cast<std::size_t>(n) * sizeof(double), h);
  return h;
}

}  // namespace scamlgp
