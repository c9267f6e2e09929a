#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace scamlgp {

struct CholeskyResult {
  Eigen::MatrixXd factor;  // lower triangular L with A + jitter*I = L L^T
  double jitter = 0.0;     // diagonal boost that made the factorization succeed
};

// Cholesky with an escalating jitter ladder {0, 1e-10, 1e-8, 1e-6, 1e-4}.
// Throws NotPositiveDefiniteError (carrying the final jitter tried) if the
// ladder is exhausted, std::invalid_argument on non-finite input.
CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& A);

// Solves (L L^T) x = b given the lower Cholesky factor.
Eigen::VectorXd chol_solve(const Eigen::MatrixXd& L, const Eigen::VectorXd& b);
Eigen::MatrixXd chol_solve(const Eigen::MatrixXd& L, const Eigen::MatrixXd& B);

// Solves L x = b (forward substitution) for lower triangular L.
Eigen::MatrixXd tri_solve(const Eigen::MatrixXd& L, const Eigen::MatrixXd& B);

// log det(L L^T) = 2 sum_i log L_ii
double chol_log_det(const Eigen::MatrixXd& L);

// Smallest eigenvalue of a symmetric matrix (used by PSD checks).
double min_eigenvalue(const Eigen::MatrixXd& A);

// FNV-1a over raw bytes; used to key caches and derive content-dependent
// random streams.
std::uint64_t hash_bytes(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t hash_matrix(const Eigen::MatrixXd& m, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t hash_vector(const Eigen::VectorXd& v, std::uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace scamlgp
