#pragma once

#include <cstdint>
#include <vector>

#include "dopt/linalg.hpp"

namespace dopt {

/// Continuous-time Markov generator: off-diagonal rates >= 0, rows sum to zero.
class GeneratorMatrix {
 public:
  const Matrix& rates() const { return rates_; }
  int num_states() const { return static_cast<int>(rates_.rows()); }
  /// Total exit rate of state p (= -gamma_pp).
  double exit_rate(int p) const { return -rates_(p, p); }

 private:
  friend GeneratorMatrix validate_generator(const Matrix& y);
  explicit GeneratorMatrix(Matrix rates) : rates_(std::move(rates)) {}
  Matrix rates_;
};

GeneratorMatrix validate_generator(const Matrix& y);

/// Unique pi with pi^T Y = 0, sum(pi) = 1, pi > 0. Throws kReducible otherwise.
Vector stationary_distribution(const GeneratorMatrix& y);

/// Piecewise-constant, right-continuous mode signal on [0, horizon].
/// Mode ids are zero-based here; exports add one.
struct ModePath {
  std::vector<double> switch_times;  // switch_times[0] == 0
  std::vector<int> mode_ids;
  double horizon = 0.0;

  int mode_at(double t) const;
  /// Time spent in each segment, clipped to the horizon.
  std::vector<double> segment_durations() const;
};

/// Normalizes a nonnegative weight vector to a probability vector. Sets
/// `was_normalized` when the input sum differed from one by more than 1e-12.
Vector normalize_distribution(const Vector& weights, bool* was_normalized = nullptr);

ModePath sample_mode_path(const GeneratorMatrix& y, const Vector& initial_dist, double horizon,
                          std::uint64_t seed);

/// Time fraction spent in each state over the path.
Vector occupation_fractions(const ModePath& path, int num_states);

}  // namespace dopt
