#pragma once

#include <vector>

#include "dopt/linalg.hpp"
#include "dopt/protocol.hpp"

namespace dopt {
struct Scenario;
struct StateLayout;
}  // namespace dopt

namespace dopt::kernels {

/// One RK stage: the current stacked state plus, per receiving agent, the
/// stacked state it sees at its delayed time.
struct StageInput {
  const Scenario& scenario;
  const StateLayout& layout;
  const Matrix& adjacency;
  const Vector& state;
  const std::vector<Vector>& delayed;  // one stacked state per agent
};

/// Writes the stacked derivative. `rates` (optional) receives each agent's
/// full rate record (u and v are logged from it).
void stage_rates_serial(const StageInput& in, Vector& deriv, std::vector<AgentRates>* rates);

/// Agents evaluated concurrently; results bit-identical to the serial path.
void stage_rates_parallel(const StageInput& in, Vector& deriv, std::vector<AgentRates>* rates);

}  // namespace dopt::kernels
