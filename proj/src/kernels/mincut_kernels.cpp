#include "dopt/kernels/mincut.hpp"

#include <limits>

namespace dopt::kernels {
namespace {

double cut_mass(const Matrix& w, std::uint32_t mask) {
  const int n = static_cast<int>(w.rows());
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(mask >> i & 1u)) continue;
    for (int j = 0; j < n; ++j) {
      if (mask >> j & 1u) continue;
      sum += w(i, j);
    }
  }
  return sum;
}

}  // namespace

SubsetCut min_cut_serial(const Matrix& weights) {
  const int n = static_cast<int>(weights.rows());
  const std::uint32_t full = (1u << n) - 1u;
  SubsetCut best{std::numeric_limits<double>::infinity(), 0};
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const double v = cut_mass(weights, mask);
    if (v < best.value) best = {v, mask};
  }
  return best;
}

SubsetCut min_cut_parallel(const Matrix& weights) {
  const int n = static_cast<int>(weights.rows());
  const std::int64_t full = (std::int64_t{1} << n) - 1;
  SubsetCut best{std::numeric_limits<double>::infinity(), 0};
#pragma omp parallel
  {
    SubsetCut local{std::numeric_limits<double>::infinity(), 0};
#pragma omp for schedule(static) nowait
    for (std::int64_t m = 1; m < full; ++m) {
      const auto mask = static_cast<std::uint32_t>(m);
      const double v = cut_mass(weights, mask);
      if (v < local.value || (v == local.value && mask < local.mask)) local = {v, mask};
    }
#pragma omp critical(dopt_min_cut)
    {
      if (local.value < best.value || (local.value == best.value && local.mask < best.mask)) {
        best = local;
      }
    }
  }
  return best;
}

}  // namespace dopt::kernels
