#include "dopt/protocol.hpp"

#include <string>

#include "dopt/error.hpp"

namespace dopt {

void ProtocolParams::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw Error(ErrorCode::kInput, "protocol gains alpha and beta must be positive");
}

ConsensusErrors consensus_errors(int agent, const Eigen::Ref<const Vector>& adjacency_row, const DelayedView& view) {
  const int n = static_cast<int>(adjacency_row.size());
  if (agent < 0 || agent >= n || static_cast<int>(view.y.size()) <= agent) {
    throw Error(ErrorCode::kHistoryUnderflow, "consensus_errors: no delayed sample for agent " + std::to_string(agent + 1));
  }
  const Eigen::Index q = view.y[agent].size();
  ConsensusErrors e{Vector::Zero(q), Vector::Zero(q)};
  for (int j = 0; j < n; ++j) {
    const double a = adjacency_row(j);
    if (a == 0.0 || j == agent) continue;
    if (j >= static_cast<int>(view.y.size()) || j >= static_cast<int>(view.eta.size()) ||
        j >= static_cast<int>(view.z.size()) || view.y[j].size() != q) {
      throw Error(ErrorCode::kHistoryUnderflow, "consensus_errors: missing delayed sample of neighbor " +
                                                    std::to_string(j + 1) + " for agent " + std::to_string(agent + 1));
    }
    e.e_etaz += a * ((view.eta[agent] - view.eta[j]) + (view.z[agent] - view.z[j]));
    e.e_y += a * (view.y[agent] - view.y[j]);
  }
  return e;
}

AgentRates agent_derivatives(const AgentModel& m, const GainSet& gains, const QuadraticCost& f, const AgentState& s,
                             const ConsensusErrors& errors, const ProtocolParams& params) {
  AgentRates r;
  const Vector y = m.c * s.x;
  r.v = -f.gradient(y) - params.beta * errors.e_etaz - params.alpha * params.beta * errors.e_y;
  r.u = -gains.k * s.x - (gains.u - gains.k * gains.x) * s.eta + gains.w * r.v;
  r.xdot = m.a * s.x + m.b * r.u;
  r.etadot = r.v;
  r.zdot = params.alpha * params.beta * errors.e_y;
  return r;
}

}  // namespace dopt
