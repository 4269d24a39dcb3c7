#include "dopt/plant.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "dopt/error.hpp"

namespace dopt {

void AgentModel::validate(int agent_index) const {
  const std::string who = "agent " + std::to_string(agent_index + 1);
  if (a.rows() < 1 || a.rows() != a.cols()) throw Error(ErrorCode::kDimension, who + ": A must be square");
  if (b.rows() != a.rows() || b.cols() < 1) throw Error(ErrorCode::kDimension, who + ": B must have n rows");
  if (c.cols() != a.rows() || c.rows() < 1) throw Error(ErrorCode::kDimension, who + ": C must have n columns");
}

RankReport check_rank_condition(const AgentModel& m) {
  const int n = m.n(), p = m.p(), q = m.q();
  Matrix stacked = Matrix::Zero(q + n, 2 * p);
  stacked.topLeftCorner(q, p) = m.c * m.b;
  stacked.bottomLeftCorner(n, p) = -m.a * m.b;
  stacked.bottomRightCorner(n, p) = m.b;
  RankReport r;
  r.rank = numerical_rank(stacked, 1e-9);
  r.required = n + q;
  r.satisfied = r.rank == r.required;
  return r;
}

double RegulatorResiduals::max() const { return std::max({bu_minus_ax, bw_minus_x, cx_minus_i}); }

RegulatorResiduals regulator_residuals(const AgentModel& m, const Matrix& u, const Matrix& w, const Matrix& x) {
  RegulatorResiduals r;
  r.bu_minus_ax = (m.b * u - m.a * x).norm();
  r.bw_minus_x = (m.b * w - x).norm();
  r.cx_minus_i = (m.c * x - Matrix::Identity(m.q(), m.q())).norm();
  return r;
}

RegulatorSolution solve_regulator(const AgentModel& m) {
  const int n = m.n(), p = m.p(), q = m.q();
  // Unknowns [vec U (p q); vec W (p q); vec X (n q)], column-major vec.
  // vec(M Z) = (I_q (x) M) vec Z.
  const Matrix iq = Matrix::Identity(q, q);
  const int cols = 2 * p * q + n * q;
  const int rows = 2 * n * q + q * q;
  Matrix op = Matrix::Zero(rows, cols);
  Vector rhs = Vector::Zero(rows);
  const Matrix kb = kron(iq, m.b);
  const Matrix ka = kron(iq, m.a);
  const Matrix kc = kron(iq, m.c);
  const Matrix in_q = Matrix::Identity(n * q, n * q);
  // B U - A X = 0
  op.block(0, 0, n * q, p * q) = kb;
  op.block(0, 2 * p * q, n * q, n * q) = -ka;
  // B W - X = 0
  op.block(n * q, p * q, n * q, p * q) = kb;
  op.block(n * q, 2 * p * q, n * q, n * q) = -in_q;
  // C X = I
  op.block(2 * n * q, 2 * p * q, q * q, n * q) = kc;
  rhs.tail(q * q) = Eigen::Map<const Vector>(iq.data(), q * q);

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(op);
  cod.setThreshold(1e-12);
  const Vector sol = cod.solve(rhs);

  RegulatorSolution out;
  out.u = Eigen::Map<const Matrix>(sol.data(), p, q);
  out.w = Eigen::Map<const Matrix>(sol.data() + p * q, p, q);
  out.x = Eigen::Map<const Matrix>(sol.data() + 2 * p * q, n, q);
  out.residuals = regulator_residuals(m, out.u, out.w, out.x);
  if (!(out.residuals.max() <= 1e-10)) {
    throw Error(ErrorCode::kNoSolution,
                "regulator equations have no solution (residual " + std::to_string(out.residuals.max()) +
                    "); the rank condition rank [[CB,0],[-AB,B]] = n+q likely fails");
  }
  return out;
}

double hurwitz_margin(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::kDimension, "hurwitz_margin: matrix must be square");
  if (a.size() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Matrix> es(a, false);
  return es.eigenvalues().real().maxCoeff();
}

Matrix closed_loop(const AgentModel& m, const Matrix& k) {
  if (k.rows() != m.p() || k.cols() != m.n()) throw Error(ErrorCode::kDimension, "K must be p x n");
  return m.a - m.b * k;
}

}  // namespace dopt
