#include "dopt/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "dopt/error.hpp"

namespace dopt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInput: return "E_INPUT";
    case ErrorCode::kDimension: return "E_DIMENSION";
    case ErrorCode::kGenerator: return "E_GENERATOR";
    case ErrorCode::kReducible: return "E_REDUCIBLE";
    case ErrorCode::kNotHurwitz: return "E_NOT_HURWITZ";
    case ErrorCode::kNoSolution: return "E_NO_SOLUTION";
    case ErrorCode::kHistoryUnderflow: return "E_HISTORY_UNDERFLOW";
    case ErrorCode::kDivergence: return "E_DIVERGENCE";
    case ErrorCode::kResource: return "E_RESOURCE";
    case ErrorCode::kInfeasible: return "E_INFEASIBLE";
    case ErrorCode::kUndecided: return "E_UNDECIDED";
    case ErrorCode::kIo: return "E_IO";
  }
  return "E_UNKNOWN";
}

Matrix block_diag(std::span<const Matrix> blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double max_sym_eig(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double min_sym_eig(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

int numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double cutoff = rel_tol * s(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) ++rank;
  }
  return rank;
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || q.rows() != n || q.cols() != n) {
    throw Error(ErrorCode::kDimension, "solve_lyapunov: A and Q must be square and equal size");
  }
  // vec(PA) + vec(A^T P) = (A^T (x) I + I (x) A^T) vec(P)
  const Matrix id = Matrix::Identity(n, n);
  const Matrix op = kron(a.transpose(), id) + kron(id, a.transpose());
  Eigen::FullPivLU<Matrix> lu(op);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::kNotHurwitz, "solve_lyapunov: operator is singular (A has eigenvalues summing to zero)");
  }
  const Vector rhs = -Eigen::Map<const Vector>(q.data(), n * n);
  Vector p = lu.solve(rhs);
  Matrix out = Eigen::Map<Matrix>(p.data(), n, n);
  return sym(out);
}

Matrix expm(const Matrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix scaled = a / std::ldexp(1.0, squarings);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k <= 18; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace dopt
