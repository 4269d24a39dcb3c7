#include "dopt/markov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "dopt/error.hpp"

namespace dopt {

GeneratorMatrix validate_generator(const Matrix& y) {
  if (y.rows() < 1 || y.rows() != y.cols()) {
    throw Error(ErrorCode::kGenerator, "generator must be a nonempty square matrix");
  }
  for (Eigen::Index p = 0; p < y.rows(); ++p) {
    const std::string row = std::to_string(p + 1);
    for (Eigen::Index q = 0; q < y.cols(); ++q) {
      if (!std::isfinite(y(p, q))) throw Error(ErrorCode::kGenerator, "generator row " + row + ": non-finite rate");
      if (p != q && y(p, q) < 0.0) {
        throw Error(ErrorCode::kGenerator, "generator row " + row + ": negative off-diagonal rate");
      }
    }
    if (y(p, p) > 0.0) throw Error(ErrorCode::kGenerator, "generator row " + row + ": positive diagonal");
    const double sum = y.row(p).sum();
    if (std::abs(sum) > 1e-12) {
      throw Error(ErrorCode::kGenerator, "generator row " + row + ": sums to " + std::to_string(sum) + ", not 0");
    }
  }
  return GeneratorMatrix(y);
}

Vector stationary_distribution(const GeneratorMatrix& y) {
  const int s = y.num_states();
  if (s == 1) return Vector::Ones(1);
  // Replace one balance equation by the normalization constraint.
  Matrix sys = y.rates().transpose();
  Eigen::FullPivLU<Matrix> kernel_lu(sys);
  if (kernel_lu.dimensionOfKernel() != 1) {
    throw Error(ErrorCode::kReducible, "generator is reducible: stationary distribution is not unique");
  }
  sys.row(s - 1).setOnes();
  Vector rhs = Vector::Zero(s);
  rhs(s - 1) = 1.0;
  Vector pi = sys.fullPivLu().solve(rhs);
  if ((pi.array() <= 0.0).any()) {
    throw Error(ErrorCode::kReducible, "generator has transient states: stationary distribution not positive");
  }
  return pi;
}

int ModePath::mode_at(double t) const {
  const auto it = std::upper_bound(switch_times.begin(), switch_times.end(), t);
  const auto idx = std::max<std::ptrdiff_t>(0, std::distance(switch_times.begin(), it) - 1);
  return mode_ids[static_cast<std::size_t>(idx)];
}

std::vector<double> ModePath::segment_durations() const {
  std::vector<double> out(switch_times.size());
  for (std::size_t k = 0; k < switch_times.size(); ++k) {
    const double end = k + 1 < switch_times.size() ? switch_times[k + 1] : horizon;
    out[k] = end - switch_times[k];
  }
  return out;
}

Vector normalize_distribution(const Vector& weights, bool* was_normalized) {
  if (weights.size() == 0 || (weights.array() < 0.0).any() || !weights.allFinite()) {
    throw Error(ErrorCode::kInput, "distribution weights must be finite and nonnegative");
  }
  const double sum = weights.sum();
  if (sum <= 0.0) throw Error(ErrorCode::kInput, "distribution weights sum to zero");
  if (was_normalized) *was_normalized = std::abs(sum - 1.0) > 1e-12;
  return weights / sum;
}

namespace {

int draw_index(const Vector& probs, std::mt19937_64& rng) {
  std::discrete_distribution<int> dist(probs.data(), probs.data() + probs.size());
  return dist(rng);
}

}  // namespace

ModePath sample_mode_path(const GeneratorMatrix& y, const Vector& initial_dist, double horizon,
                          std::uint64_t seed) {
  const int s = y.num_states();
  if (initial_dist.size() != s) throw Error(ErrorCode::kDimension, "initial distribution size differs from state count");
  if (!(horizon > 0.0)) throw Error(ErrorCode::kInput, "path horizon must be positive");
  std::mt19937_64 rng(seed);
  ModePath path;
  path.horizon = horizon;
  int mode = draw_index(normalize_distribution(initial_dist), rng);
  double t = 0.0;
  path.switch_times.push_back(0.0);
  path.mode_ids.push_back(mode);
  for (;;) {
    const double rate = y.exit_rate(mode);
    if (rate <= 0.0) break;  // absorbing
    std::exponential_distribution<double> hold(rate);
    t += hold(rng);
    if (t >= horizon) break;
    Vector jump = y.rates().row(mode).transpose();
    jump(mode) = 0.0;
    mode = draw_index(jump / rate, rng);
    path.switch_times.push_back(t);
    path.mode_ids.push_back(mode);
  }
  return path;
}

Vector occupation_fractions(const ModePath& path, int num_states) {
  Vector occ = Vector::Zero(num_states);
  const auto dur = path.segment_durations();
  for (std::size_t k = 0; k < dur.size(); ++k) occ(path.mode_ids[k]) += dur[k];
  return occ / path.horizon;
}

}  // namespace dopt
