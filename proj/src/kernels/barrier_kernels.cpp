#include "dopt/kernels/barrier.hpp"

#include <vector>

namespace dopt::kernels {
namespace {

// tr(A B) without forming the product.
double trace_product(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b.transpose()).sum(); }

}  // namespace

void accumulate_barrier_serial(const Matrix& s_inv, std::span<const Matrix> g, std::span<const int> index,
                               Vector& grad, Matrix& hess) {
  const int m = static_cast<int>(g.size());
  std::vector<Matrix> w(m);
  for (int k = 0; k < m; ++k) {
    w[k].noalias() = s_inv * g[k];
    grad(index[k]) -= w[k].trace();
  }
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      const double h = trace_product(w[a], w[b]);
      hess(index[a], index[b]) += h;
      if (a != b) hess(index[b], index[a]) += h;
    }
  }
}

void accumulate_barrier_parallel(const Matrix& s_inv, std::span<const Matrix> g, std::span<const int> index,
                                 Vector& grad, Matrix& hess) {
  const int m = static_cast<int>(g.size());
  std::vector<Matrix> w(m);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < m; ++k) w[k].noalias() = s_inv * g[k];
  for (int k = 0; k < m; ++k) grad(index[k]) -= w[k].trace();

  // Rows of the upper triangle have uneven lengths; dynamic scheduling
  // balances them. Each (a, b) pair is written by exactly one thread.
#pragma omp parallel for schedule(dynamic, 1)
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      const double h = trace_product(w[a], w[b]);
      hess(index[a], index[b]) += h;
      if (a != b) hess(index[b], index[a]) += h;
    }
  }
}

}  // namespace dopt::kernels
