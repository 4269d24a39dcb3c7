#pragma once

#include <span>

#include "dopt/linalg.hpp"

namespace dopt::kernels {

/// Derivatives of -log det S(z) for one block, S = G0 + sum_k z_k G_k.
/// `g` holds the nonzero coefficient matrices and `index` their variable ids.
/// Adds -tr(S^-1 G_k) to grad and tr(S^-1 G_a S^-1 G_b) to hess.
void accumulate_barrier_serial(const Matrix& s_inv, std::span<const Matrix> g, std::span<const int> index,
                               Vector& grad, Matrix& hess);

/// Same sums with the products and pairwise traces spread over threads.
/// Each Hessian entry is summed in the same order, so results match the
/// serial path bit for bit.
void accumulate_barrier_parallel(const Matrix& s_inv, std::span<const Matrix> g, std::span<const int> index,
                                 Vector& grad, Matrix& hess);

}  // namespace dopt::kernels
