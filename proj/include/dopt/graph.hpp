#pragma once

#include <vector>

#include "dopt/linalg.hpp"

namespace dopt {

/// One topology mode. adjacency(i, j) is the weight with which agent i hears agent j.
class ModeDigraph {
 public:
  explicit ModeDigraph(Matrix adjacency);

  int size() const { return static_cast<int>(adjacency_.rows()); }
  const Matrix& adjacency() const { return adjacency_; }

 private:
  Matrix adjacency_;
};

class SwitchingTopology {
 public:
  explicit SwitchingTopology(std::vector<ModeDigraph> modes);

  int num_agents() const { return modes_.front().size(); }
  int num_modes() const { return static_cast<int>(modes_.size()); }
  const ModeDigraph& mode(int p) const { return modes_.at(p); }
  const std::vector<ModeDigraph>& modes() const { return modes_; }

 private:
  std::vector<ModeDigraph> modes_;
};

Matrix laplacian(const ModeDigraph& g);

struct UnionMirror {
  Matrix union_laplacian;
  Matrix mirror;  // (L_un + L_un^T) / 2
  bool union_strongly_connected = false;
};

UnionMirror union_mirror(const SwitchingTopology& t);

/// True when every node reaches every other node along edges with positive weight.
bool strongly_connected(const Matrix& adjacency);

/// True when some root reaches every node (directed spanning tree).
bool has_spanning_tree(const Matrix& adjacency);

struct CutReport {
  double cut_value = 0.0;
  std::vector<int> witness_subset;  // zero-based node indices
};

/// Minimum over nonempty proper subsets S of the mirror-edge mass -L_s[i][j]
/// crossing from S to its complement. Brute force, N <= 20.
CutReport minimum_cut(const Matrix& mirror);

inline constexpr int kMaxCutNodes = 20;

struct Lemma1Result {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// zeta^T Q zeta against (pi_min c / N^2) |zeta|^2 with Q = diag(pi) L_un + L_un^T diag(pi).
Lemma1Result lemma1_check(const SwitchingTopology& modes, const Vector& pi, const Vector& zeta);

/// Positive left null vector of the union Laplacian, normalized to sum 1.
/// Throws when none exists (no common stationary distribution).
Vector union_stationary_weights(const SwitchingTopology& t);

}  // namespace dopt
