#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dopt/error.hpp"
#include "dopt/exec.hpp"
#include "dopt/graph.hpp"
#include "dopt/linalg.hpp"
#include "dopt/markov.hpp"
#include "dopt/objective.hpp"
#include "dopt/plant.hpp"
#include "dopt/protocol.hpp"

namespace dopt {

struct DelaySpec {
  enum class Kind { kConstant, kSinusoidal };

  Kind kind = Kind::kConstant;
  std::vector<double> bound;  // per agent d_bar_i >= 0
  double omega = 0.0;         // sinusoidal frequency

  /// d_i(t): d_bar_i for constant delays, (d_bar_i / 2)(1 + sin(omega t)) otherwise.
  double at(int agent, double t) const;
  /// Bound on |d_i'(t)|: 0 for constant, d_bar_i omega / 2 for sinusoidal.
  double rate_bound(int agent) const;
  double max_bound() const;
  double min_positive_bound() const;

  static DelaySpec constant(int num_agents, double d);
};

struct SimSettings {
  double dt = 1e-3;
  double horizon = 10.0;
  std::uint64_t seed = 1;
  ExecPolicy policy = ExecPolicy::kSerial;
};

struct AnalysisSettings {
  double varpi = 0.0;
  std::string variant = "theorem1";
  double d_max = 1.0;
  double tol = 0.01;
};

struct Scenario {
  std::vector<AgentModel> agents;
  std::vector<GainSet> gains;
  CostSet costs;
  SwitchingTopology topology;
  GeneratorMatrix generator;
  Vector initial_distribution;
  ProtocolParams protocol;
  DelaySpec delay;
  std::vector<Vector> x0;  // eta(0) = z(0) = 0
  SimSettings sim;
  AnalysisSettings analysis;

  int num_agents() const { return static_cast<int>(agents.size()); }
  int output_dim() const { return agents.front().q(); }

  /// Cross-module checks: shared q, dimensions, rank condition, Hurwitz
  /// closed loops, regulator residuals, topology/generator sizes.
  void validate() const;
};

/// Offsets of each agent's (x, eta, z) block in the stacked state.
struct StateLayout {
  std::vector<int> x_offset;
  std::vector<int> eta_offset;
  std::vector<int> z_offset;
  std::vector<int> n;
  int q = 0;
  int dim = 0;

  explicit StateLayout(const std::vector<AgentModel>& agents);
};

struct Trajectory {
  double dt = 0.0;
  int num_agents = 0;
  int q = 0;
  std::vector<double> time;
  std::vector<int> mode;  // zero-based
  Matrix state;           // rows: grid points, stacked (x_i, eta_i, z_i)
  Matrix y;               // rows: grid points, cols: agent-major N q
  Matrix u;               // cols: sum p_i
  Matrix v;               // cols: N q
  Matrix xi;              // x - X eta, cols: sum n_i

  std::size_t size() const { return time.size(); }
  Vector y_of(std::size_t k, int agent) const { return y.row(k).segment(agent * q, q).transpose(); }
};

/// Thrown when the state norm exceeds 1e9 or becomes non-finite. Carries
/// the trajectory up to the blow-up.
class DivergenceError : public Error {
 public:
  DivergenceError(double time, Trajectory partial);
  double time() const { return time_; }
  const Trajectory& partial() const { return partial_; }

 private:
  double time_;
  Trajectory partial_;
};

inline constexpr double kDivergenceNorm = 1e9;

/// Classical RK4 on the stacked closed loop. Delayed reads use the
/// Hermite history at each stage time; the topology mode at the start
/// of a step rules the whole step.
Trajectory integrate(const Scenario& sc);
Trajectory integrate(const Scenario& sc, const ModePath& path);

struct Metrics {
  std::optional<double> convergence_time;
  double final_error = 0.0;
  Matrix per_agent_error;  // rows: grid points, cols: agents
};

Metrics metrics(const Trajectory& tr, const Vector& theta_star, double tol);

struct ResidualReport {
  double max_defect = 0.0;         // max_k |central diff xi - Atilde xi|
  double threshold = 0.0;          // 10 dt^2 |Atilde|^3 max|xi|
  double max_tracking_error = 0.0; // max_k |xi_k - e^{Atilde t_k} xi_0| / |e^{Atilde t_k} xi_0|
  bool within_threshold = false;
};

/// Block-diagonal A_i - B_i K_i.
Matrix stacked_closed_loop(const Scenario& sc);

ResidualReport residual_invariant_report(const Trajectory& tr, const Matrix& atilde);

}  // namespace dopt
