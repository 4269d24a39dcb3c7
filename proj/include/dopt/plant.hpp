#pragma once

#include "dopt/linalg.hpp"

namespace dopt {

/// x' = A x + B u, y = C x with dims (n, p, q).
struct AgentModel {
  Matrix a;
  Matrix b;
  Matrix c;

  int n() const { return static_cast<int>(a.rows()); }
  int p() const { return static_cast<int>(b.cols()); }
  int q() const { return static_cast<int>(c.rows()); }

  /// Throws kDimension naming `agent_label` when shapes disagree.
  void validate(int agent_index) const;
};

/// Feedback gain K and feedforward solution (U, W, X) of B U = A X, B W = X, C X = I.
struct GainSet {
  Matrix k;
  Matrix u;
  Matrix w;
  Matrix x;
};

struct RankReport {
  int rank = 0;
  int required = 0;
  bool satisfied = false;
};

/// rank [[C B, 0], [-A B, B]] == n + q.
RankReport check_rank_condition(const AgentModel& m);

struct RegulatorResiduals {
  double bu_minus_ax = 0.0;
  double bw_minus_x = 0.0;
  double cx_minus_i = 0.0;

  double max() const;
};

RegulatorResiduals regulator_residuals(const AgentModel& m, const Matrix& u, const Matrix& w, const Matrix& x);

struct RegulatorSolution {
  Matrix u;
  Matrix w;
  Matrix x;
  RegulatorResiduals residuals;
};

/// Minimum-norm least-squares solution of the stacked regulator equations.
/// Throws kNoSolution when the residual exceeds 1e-10.
RegulatorSolution solve_regulator(const AgentModel& m);

/// max Re(lambda) of a square matrix; negative iff Hurwitz.
double hurwitz_margin(const Matrix& a);

/// A - B K.
Matrix closed_loop(const AgentModel& m, const Matrix& k);

}  // namespace dopt
