#pragma once

#include <cstddef>
#include <vector>

#include "dopt/linalg.hpp"

namespace dopt {

/// Fixed-capacity ring of uniformly spaced (state, derivative) samples.
/// Lookups use cubic Hermite interpolation between neighbouring samples.
/// Times before the first sample return the initial state (constant
/// initial history); times past the newest sample extrapolate linearly
/// along the newest derivative.
class HistoryBuffer {
 public:
  /// `span` is the longest lookback that must stay available.
  HistoryBuffer(double t0, double dt, double span, Vector initial_state);

  /// Appends the state at the next grid time. Its derivative is unknown
  /// until set_newest_derivative is called.
  void push(const Vector& state);
  void set_newest_derivative(const Vector& derivative);

  /// Interpolated stacked state at time `t`.
  void sample(double t, Vector& out) const;

  double newest_time() const { return t0_ + dt_ * static_cast<double>(count_ - 1); }
  double oldest_time() const;
  std::size_t capacity() const { return states_.size(); }

 private:
  std::size_t slot(std::size_t k) const { return k % states_.size(); }

  double t0_;
  double dt_;
  Vector initial_;
  std::vector<Vector> states_;
  std::vector<Vector> derivs_;
  std::size_t count_ = 0;  // total samples pushed
};

}  // namespace dopt
