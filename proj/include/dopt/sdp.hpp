#pragma once

#include <vector>

#include "dopt/exec.hpp"
#include "dopt/linalg.hpp"

namespace dopt::sdp {

/// Symmetric affine map F(x) = f0 + sum_i x_i F_i. Only nonzero
/// coefficients are stored.
struct AffineBlock {
  Matrix f0;
  std::vector<int> index;
  std::vector<Matrix> coeff;

  int size() const { return static_cast<int>(f0.rows()); }
  Matrix evaluate(const Vector& x) const;
};

/// minimize t subject to F_j(x) <= t I for every block j.
struct Problem {
  int num_vars = 0;
  std::vector<AffineBlock> blocks;

  /// Builds a block by probing an affine callable at 0 and at each unit vector.
  template <typename Fn>
  void add_probed(Fn&& fn, double zero_tol = 0.0);
};

enum class Status { kFeasible, kInfeasible, kUndecided };

struct Options {
  double mu = 1e-6;           // feasible once t <= -mu
  double tau0 = 1.0;          // initial barrier weight on t
  double tau_growth = 10.0;
  double tau_max = 1e12;
  int max_newton = 50;        // per centering step
  int max_total_newton = 4000;
  bool stop_when_feasible = true;
  bool stop_when_infeasible = true;
  double gap_tol = 1e-6;      // relative duality gap at which to stop
  ExecPolicy policy = ExecPolicy::kSerial;
};

struct Result {
  Status status = Status::kUndecided;
  Vector x;
  double t = 0.0;            // max_j lambda_max(F_j(x)) at the returned x
  double lower_bound = 0.0;  // certified lower bound on the optimal t
  int newton_steps = 0;
};

/// Log-det barrier path following. "Infeasible" means the certified lower
/// bound exceeds -mu; "undecided" means the iteration budget ran out first.
Result minimize_max_eig(const Problem& problem, const Options& options, const Vector* warm_start = nullptr);

/// max_j lambda_max(F_j(x)).
double max_eigenvalue(const Problem& problem, const Vector& x);

template <typename Fn>
void Problem::add_probed(Fn&& fn, double zero_tol) {
  AffineBlock blk;
  Vector x = Vector::Zero(num_vars);
  blk.f0 = sym(fn(x));
  for (int i = 0; i < num_vars; ++i) {
    x.setZero();
    x(i) = 1.0;
    Matrix fi = sym(fn(x)) - blk.f0;
    if (fi.cwiseAbs().maxCoeff() <= zero_tol) continue;
    blk.index.push_back(i);
    blk.coeff.push_back(std::move(fi));
  }
  blocks.push_back(std::move(blk));
}

}  // namespace dopt::sdp
