#include "dopt/kernels/agent_stage.hpp"

#include <exception>

#include "dopt/sim.hpp"

namespace dopt::kernels {
namespace {

DelayedView make_view(const StageInput& in, const Vector& stacked) {
  const auto& L = in.layout;
  const int n_agents = static_cast<int>(L.n.size());
  DelayedView view;
  view.eta.reserve(n_agents);
  view.z.reserve(n_agents);
  view.y.reserve(n_agents);
  for (int j = 0; j < n_agents; ++j) {
    view.eta.push_back(stacked.segment(L.eta_offset[j], L.q));
    view.z.push_back(stacked.segment(L.z_offset[j], L.q));
    view.y.push_back(in.scenario.agents[j].c * stacked.segment(L.x_offset[j], L.n[j]));
  }
  return view;
}

void one_agent(const StageInput& in, int i, Vector& deriv, std::vector<AgentRates>* rates) {
  const auto& L = in.layout;
  const auto& sc = in.scenario;
  const DelayedView view = make_view(in, in.delayed[i]);
  const ConsensusErrors errs = consensus_errors(i, in.adjacency.row(i).transpose(), view);
  AgentState s{in.state.segment(L.x_offset[i], L.n[i]), in.state.segment(L.eta_offset[i], L.q),
               in.state.segment(L.z_offset[i], L.q)};
  AgentRates r = agent_derivatives(sc.agents[i], sc.gains[i], sc.costs[i], s, errs, sc.protocol);
  deriv.segment(L.x_offset[i], L.n[i]) = r.xdot;
  deriv.segment(L.eta_offset[i], L.q) = r.etadot;
  deriv.segment(L.z_offset[i], L.q) = r.zdot;
  if (rates) (*rates)[i] = std::move(r);
}

}  // namespace

void stage_rates_serial(const StageInput& in, Vector& deriv, std::vector<AgentRates>* rates) {
  const int n_agents = static_cast<int>(in.layout.n.size());
  deriv.resize(in.layout.dim);
  if (rates) rates->resize(n_agents);
  for (int i = 0; i < n_agents; ++i) one_agent(in, i, deriv, rates);
}

void stage_rates_parallel(const StageInput& in, Vector& deriv, std::vector<AgentRates>* rates) {
  const int n_agents = static_cast<int>(in.layout.n.size());
  deriv.resize(in.layout.dim);
  if (rates) rates->resize(n_agents);
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n_agents; ++i) {
    try {
      one_agent(in, i, deriv, rates);
    } catch (...) {
#pragma omp critical(dopt_stage_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace dopt::kernels
