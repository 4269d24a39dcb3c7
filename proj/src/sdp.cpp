#include "dopt/sdp.hpp"

#include <cmath>
#include <limits>

#include "dopt/error.hpp"
#include "dopt/kernels/barrier.hpp"

namespace dopt::sdp {
namespace {

constexpr double kCenteringTol = 1e-8;  // half squared Newton decrement
constexpr int kMaxHalvings = 60;

// Slack S_j = t I - F_j(x); nullopt when some block is not positive definite.
struct Slacks {
  std::vector<Eigen::LLT<Matrix>> chol;
  double logdet = 0.0;
};

bool factor_slacks(const Problem& pr, const Vector& x, double t, Slacks& out) {
  out.chol.clear();
  out.logdet = 0.0;
  for (const auto& blk : pr.blocks) {
    Matrix s = -blk.evaluate(x);
    s.diagonal().array() += t;
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() != Eigen::Success) return false;
    const auto diag = llt.matrixLLT().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
      if (!(diag(i) > 0.0)) return false;
      out.logdet += 2.0 * std::log(diag(i));
    }
    out.chol.push_back(std::move(llt));
  }
  return true;
}

double barrier_value(double tau, double t, const Slacks& s) { return tau * t - s.logdet; }

}  // namespace

Matrix AffineBlock::evaluate(const Vector& x) const {
  Matrix f = f0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    const double v = x(index[k]);
    if (v != 0.0) f.noalias() += v * coeff[k];
  }
  return f;
}

double max_eigenvalue(const Problem& problem, const Vector& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& blk : problem.blocks) worst = std::max(worst, max_sym_eig(blk.evaluate(x)));
  return worst;
}

Result minimize_max_eig(const Problem& pr, const Options& opt, const Vector* warm_start) {
  if (pr.blocks.empty()) throw Error(ErrorCode::kInput, "sdp: no constraint blocks");
  const int m = pr.num_vars;
  const int tvar = m;  // index of t in the extended variable vector
  int total_dim = 0;
  for (const auto& blk : pr.blocks) total_dim += blk.size();

  // Coefficients of S = t I - F(x) per block: -F_i for x_i and I for t.
  std::vector<std::vector<Matrix>> g(pr.blocks.size());
  std::vector<std::vector<int>> gi(pr.blocks.size());
  for (std::size_t j = 0; j < pr.blocks.size(); ++j) {
    const auto& blk = pr.blocks[j];
    for (std::size_t k = 0; k < blk.index.size(); ++k) {
      g[j].push_back(-blk.coeff[k]);
      gi[j].push_back(blk.index[k]);
    }
    g[j].push_back(Matrix::Identity(blk.size(), blk.size()));
    gi[j].push_back(tvar);
  }

  Result res;
  Vector x = warm_start && warm_start->size() == m ? *warm_start : Vector::Zero(m);
  const double lam0 = max_eigenvalue(pr, x);
  double t = lam0 + std::max(1.0, 0.1 * std::abs(lam0));
  res.lower_bound = -std::numeric_limits<double>::infinity();

  Slacks cur;
  if (!factor_slacks(pr, x, t, cur)) throw Error(ErrorCode::kDivergence, "sdp: initial point not interior");

  auto finish = [&](Status st) {
    res.status = st;
    res.x = x;
    res.t = max_eigenvalue(pr, x);
    return res;
  };

  for (double tau = opt.tau0; tau <= opt.tau_max; tau *= opt.tau_growth) {
    double decrement = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opt.max_newton; ++it) {
      if (res.newton_steps >= opt.max_total_newton) return finish(Status::kUndecided);
      Vector grad = Vector::Zero(m + 1);
      Matrix hess = Matrix::Zero(m + 1, m + 1);
      grad(tvar) = tau;
      for (std::size_t j = 0; j < pr.blocks.size(); ++j) {
        const Matrix s_inv = cur.chol[j].solve(Matrix::Identity(pr.blocks[j].size(), pr.blocks[j].size()));
        if (opt.policy == ExecPolicy::kParallel) {
          kernels::accumulate_barrier_parallel(s_inv, g[j], gi[j], grad, hess);
        } else {
          kernels::accumulate_barrier_serial(s_inv, g[j], gi[j], grad, hess);
        }
      }
      // Jacobi scaling tames the spread between box-limited and free
      // coordinates; a tiny ridge covers variables that touch no block.
      Vector scale = hess.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
      Matrix hs = scale.asDiagonal() * hess * scale.asDiagonal();
      hs.diagonal().array() += 1e-14;
      Eigen::LDLT<Matrix> ldlt(hs);
      const Vector step = -(scale.asDiagonal() * ldlt.solve(scale.asDiagonal() * grad)).eval();
      decrement = -grad.dot(step);
      ++res.newton_steps;
      if (!std::isfinite(decrement)) return finish(Status::kUndecided);
      if (decrement / 2.0 <= kCenteringTol) break;

      const double phi = barrier_value(tau, t, cur);
      // Rounding in tau * t - log det dominates the Armijo decrease late in
      // the path; allow for it so centring does not stall.
      const double slop = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(tau * t) + std::abs(cur.logdet));
      double s = 1.0;
      bool accepted = false;
      Slacks trial;
      for (int h = 0; h < kMaxHalvings; ++h, s *= 0.5) {
        const Vector xn = x + s * step.head(m);
        const double tn = t + s * step(tvar);
        if (!factor_slacks(pr, xn, tn, trial)) continue;
        if (barrier_value(tau, tn, trial) <= phi - 0.25 * s * decrement + slop) {
          x = xn;
          t = tn;
          cur = std::move(trial);
          accepted = true;
          break;
        }
      }
      if (!accepted) break;  // numerically centred as far as line search allows
    }

    // At the centre of the barrier the duality gap is total_dim / tau; an
    // inexact centre inflates it by at most a factor (1 + decrement).
    // Far from the centre no bound is claimed.
    const double gap = total_dim / tau * (1.0 + std::sqrt(std::max(0.0, decrement)));
    if (decrement < 0.25) res.lower_bound = std::max(res.lower_bound, t - gap);
    const double achieved = max_eigenvalue(pr, x);
    if (opt.stop_when_feasible && achieved <= -opt.mu) return finish(Status::kFeasible);
    const bool converged = decrement < 0.25 && gap < opt.gap_tol * std::max(1.0, std::abs(t));
    if (res.lower_bound > -opt.mu && (opt.stop_when_infeasible || converged)) return finish(Status::kInfeasible);
    if (converged) return finish(achieved <= -opt.mu ? Status::kFeasible : Status::kUndecided);
  }
  return finish(Status::kUndecided);
}

}  // namespace dopt::sdp
