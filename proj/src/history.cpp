#include "dopt/history.hpp"

#include <cmath>
#include <string>

#include "dopt/error.hpp"

namespace dopt {

HistoryBuffer::HistoryBuffer(double t0, double dt, double span, Vector initial_state)
    : t0_(t0), dt_(dt), initial_(std::move(initial_state)) {
  if (!(dt > 0.0) || !(span >= 0.0)) throw Error(ErrorCode::kInput, "history buffer needs dt > 0 and span >= 0");
  const auto cap = static_cast<std::size_t>(std::ceil(span / dt)) + 3;
  states_.assign(cap, Vector::Zero(initial_.size()));
  derivs_.assign(cap, Vector::Zero(initial_.size()));
}

void HistoryBuffer::push(const Vector& state) {
  states_[slot(count_)] = state;
  derivs_[slot(count_)].setZero();
  ++count_;
}

void HistoryBuffer::set_newest_derivative(const Vector& derivative) {
  derivs_[slot(count_ - 1)] = derivative;
}

double HistoryBuffer::oldest_time() const {
  const std::size_t first = count_ > states_.size() ? count_ - states_.size() : 0;
  return t0_ + dt_ * static_cast<double>(first);
}

void HistoryBuffer::sample(double t, Vector& out) const {
  if (count_ == 0 || t < t0_) {
    out = initial_;
    return;
  }
  const double newest = newest_time();
  if (t >= newest) {
    const std::size_t k = slot(count_ - 1);
    out = states_[k] + (t - newest) * derivs_[k];
    return;
  }
  // Small tolerance so lookups landing on the oldest grid point survive rounding.
  if (t < oldest_time() - 1e-9 * dt_) {
    throw Error(ErrorCode::kHistoryUnderflow, "history underflow: requested t=" + std::to_string(t) +
                                                  " but oldest retained sample is t=" + std::to_string(oldest_time()));
  }
  const double u = (t - t0_) / dt_;
  auto k = static_cast<std::size_t>(std::floor(u));
  if (k + 1 >= count_) k = count_ - 2;
  const double s = u - static_cast<double>(k);
  const Vector& p0 = states_[slot(k)];
  const Vector& p1 = states_[slot(k + 1)];
  const Vector& m0 = derivs_[slot(k)];
  const Vector& m1 = derivs_[slot(k + 1)];
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  out = h00 * p0 + h01 * p1 + (h10 * dt_) * m0 + (h11 * dt_) * m1;
}

}  // namespace dopt
