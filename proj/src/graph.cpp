#include "dopt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "dopt/error.hpp"
#include "dopt/kernels/mincut.hpp"

namespace dopt {

ModeDigraph::ModeDigraph(Matrix adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() < 1 || adjacency_.rows() != adjacency_.cols()) {
    throw Error(ErrorCode::kDimension, "adjacency must be a nonempty square matrix");
  }
  for (Eigen::Index i = 0; i < adjacency_.rows(); ++i) {
    if (adjacency_(i, i) != 0.0) {
      throw Error(ErrorCode::kInput, "adjacency diagonal must be zero (row " + std::to_string(i + 1) + ")");
    }
    for (Eigen::Index j = 0; j < adjacency_.cols(); ++j) {
      if (!(adjacency_(i, j) >= 0.0) || !std::isfinite(adjacency_(i, j))) {
        throw Error(ErrorCode::kInput, "adjacency entries must be finite and nonnegative (row " +
                                           std::to_string(i + 1) + ")");
      }
    }
  }
}

SwitchingTopology::SwitchingTopology(std::vector<ModeDigraph> modes) : modes_(std::move(modes)) {
  if (modes_.empty()) throw Error(ErrorCode::kInput, "topology needs at least one mode");
  for (const auto& m : modes_) {
    if (m.size() != modes_.front().size()) {
      throw Error(ErrorCode::kDimension, "all topology modes must have the same number of agents");
    }
  }
}

Matrix laplacian(const ModeDigraph& g) {
  const Matrix& a = g.adjacency();
  Matrix l = -a;
  for (Eigen::Index i = 0; i < a.rows(); ++i) l(i, i) = a.row(i).sum();
  return l;
}

namespace {

std::vector<bool> reachable_from(const Matrix& adjacency, int root) {
  // Edge j -> i exists when adjacency(i, j) > 0.
  const int n = static_cast<int>(adjacency.rows());
  std::vector<bool> seen(n, false);
  std::queue<int> frontier;
  seen[root] = true;
  frontier.push(root);
  while (!frontier.empty()) {
    const int j = frontier.front();
    frontier.pop();
    for (int i = 0; i < n; ++i) {
      if (!seen[i] && adjacency(i, j) > 0.0) {
        seen[i] = true;
        frontier.push(i);
      }
    }
  }
  return seen;
}

}  // namespace

bool strongly_connected(const Matrix& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  for (int r = 0; r < n; ++r) {
    const auto seen = reachable_from(adjacency, r);
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;
  }
  return true;
}

bool has_spanning_tree(const Matrix& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  for (int r = 0; r < n; ++r) {
    const auto seen = reachable_from(adjacency, r);
    if (std::find(seen.begin(), seen.end(), false) == seen.end()) return true;
  }
  return false;
}

UnionMirror union_mirror(const SwitchingTopology& t) {
  const int n = t.num_agents();
  UnionMirror out;
  out.union_laplacian = Matrix::Zero(n, n);
  Matrix union_adj = Matrix::Zero(n, n);
  for (const auto& m : t.modes()) {
    out.union_laplacian += laplacian(m);
    union_adj += m.adjacency();
  }
  out.mirror = sym(out.union_laplacian);
  out.union_strongly_connected = strongly_connected(union_adj);
  return out;
}

CutReport minimum_cut(const Matrix& mirror) {
  const int n = static_cast<int>(mirror.rows());
  if (mirror.cols() != n) throw Error(ErrorCode::kDimension, "minimum_cut: matrix must be square");
  if (n > kMaxCutNodes) {
    throw Error(ErrorCode::kResource, "minimum_cut: brute force limited to N <= 20, got N = " + std::to_string(n));
  }
  CutReport report;
  if (n < 2) return report;
  Matrix weights = -mirror;
  weights.diagonal().setZero();
  const auto best = kernels::min_cut_parallel(weights);
  report.cut_value = best.value;
  for (int i = 0; i < n; ++i) {
    if (best.mask >> i & 1u) report.witness_subset.push_back(i);
  }
  return report;
}

Lemma1Result lemma1_check(const SwitchingTopology& modes, const Vector& pi, const Vector& zeta) {
  const int n = modes.num_agents();
  if (pi.size() != n || zeta.size() != n) {
    throw Error(ErrorCode::kDimension, "lemma1_check: pi and zeta must have N entries");
  }
  if ((pi.array() <= 0.0).any()) throw Error(ErrorCode::kInput, "lemma1_check: pi must be entrywise positive");
  if (std::abs(pi.dot(zeta)) > 1e-10) {
    throw Error(ErrorCode::kInput, "lemma1_check: zeta must be orthogonal to pi");
  }
  const auto um = union_mirror(modes);
  const Matrix weights = pi.asDiagonal();
  const Matrix q = weights * um.union_laplacian + um.union_laplacian.transpose() * weights;
  const double c = minimum_cut(um.mirror).cut_value;
  Lemma1Result r;
  r.lhs = zeta.dot(q * zeta);
  r.rhs = pi.minCoeff() * c / (static_cast<double>(n) * n) * zeta.squaredNorm();
  r.holds = r.lhs >= r.rhs - 1e-9;
  return r;
}

Vector union_stationary_weights(const SwitchingTopology& t) {
  const auto um = union_mirror(t);
  Eigen::FullPivLU<Matrix> lu(um.union_laplacian.transpose());
  const Matrix kernel = lu.kernel();
  if (kernel.cols() != 1) {
    throw Error(ErrorCode::kReducible, "union Laplacian has no unique left null vector");
  }
  Vector v = kernel.col(0);
  v /= v.sum();
  if ((v.array() <= 0.0).any() || !v.allFinite()) {
    throw Error(ErrorCode::kReducible, "union Laplacian left null vector is not positive");
  }
  return v;
}

}  // namespace dopt
