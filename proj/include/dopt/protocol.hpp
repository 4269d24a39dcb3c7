#pragma once

#include <vector>

#include "dopt/linalg.hpp"
#include "dopt/objective.hpp"
#include "dopt/plant.hpp"

namespace dopt {

struct AgentState {
  Vector x;    // plant state
  Vector eta;  // optimization state, eta' = v
  Vector z;    // integral of the output disagreement
};

struct ProtocolParams {
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;
};

/// Every agent's (eta, z, y) as seen by one receiving agent at t - d_i(t).
/// The receiver's own entry is delayed too.
struct DelayedView {
  std::vector<Vector> eta;
  std::vector<Vector> z;
  std::vector<Vector> y;
};

struct ConsensusErrors {
  Vector e_etaz;
  Vector e_y;
};

/// e_etaz = sum_j a_ij ((eta_i - eta_j) + (z_i - z_j)), e_y = sum_j a_ij (y_i - y_j),
/// everything read from `view`.
ConsensusErrors consensus_errors(int agent, const Eigen::Ref<const Vector>& adjacency_row, const DelayedView& view);

struct AgentRates {
  Vector xdot;
  Vector etadot;
  Vector zdot;
  Vector u;
  Vector v;
};

/// v = -grad f(C x) - beta e_etaz - alpha beta e_y
/// u = -K x - (U - K X) eta + W v
/// x' = A x + B u,  eta' = v,  z' = alpha beta e_y
AgentRates agent_derivatives(const AgentModel& m, const GainSet& gains, const QuadraticCost& f, const AgentState& s,
                             const ConsensusErrors& errors, const ProtocolParams& params);

}  // namespace dopt
