#pragma once

#include <cstdint>

#include "dopt/linalg.hpp"

namespace dopt::kernels {

struct SubsetCut {
  double value;
  std::uint32_t mask;
};

/// Reference enumeration of all nonempty proper subsets.
SubsetCut min_cut_serial(const Matrix& weights);

/// OpenMP enumeration; same tie-breaking (lowest mask wins) as the serial path.
SubsetCut min_cut_parallel(const Matrix& weights);

}  // namespace dopt::kernels
