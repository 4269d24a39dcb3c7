#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace dopt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

Matrix block_diag(std::span<const Matrix> blocks);

Matrix kron(const Matrix& a, const Matrix& b);

/// Largest eigenvalue of the symmetric part of `m`.
double max_sym_eig(const Matrix& m);
/// Smallest eigenvalue of the symmetric part of `m`.
double min_sym_eig(const Matrix& m);

double spectral_norm(const Matrix& m);

/// Numerical rank from singular values with relative cutoff `rel_tol * sigma_max`.
int numerical_rank(const Matrix& m, double rel_tol = 1e-9);

/// Solves P A + A^T P = -Q for symmetric P via the Kronecker-vectorized system.
Matrix solve_lyapunov(const Matrix& a, const Matrix& q);

/// Matrix exponential by scaling and squaring with a Taylor core.
Matrix expm(const Matrix& a);

inline Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace dopt
