#include "dopt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dopt/history.hpp"
#include "dopt/kernels/agent_stage.hpp"

namespace dopt {

double DelaySpec::at(int agent, double t) const {
  const double b = bound.at(agent);
  if (kind == Kind::kConstant) return b;
  return 0.5 * b * (1.0 + std::sin(omega * t));
}

double DelaySpec::rate_bound(int agent) const {
  return kind == Kind::kConstant ? 0.0 : 0.5 * bound.at(agent) * std::abs(omega);
}

double DelaySpec::max_bound() const {
  return bound.empty() ? 0.0 : *std::max_element(bound.begin(), bound.end());
}

double DelaySpec::min_positive_bound() const {
  double m = std::numeric_limits<double>::infinity();
  for (double b : bound) {
    if (b > 0.0) m = std::min(m, b);
  }
  return m;
}

DelaySpec DelaySpec::constant(int num_agents, double d) {
  DelaySpec spec;
  spec.bound.assign(static_cast<std::size_t>(num_agents), d);
  return spec;
}

StateLayout::StateLayout(const std::vector<AgentModel>& agents) {
  q = agents.front().q();
  int off = 0;
  for (const auto& a : agents) {
    n.push_back(a.n());
    x_offset.push_back(off);
    off += a.n();
    eta_offset.push_back(off);
    off += q;
    z_offset.push_back(off);
    off += q;
  }
  dim = off;
}

void Scenario::validate() const {
  const int n_agents = num_agents();
  if (n_agents < 1) throw Error(ErrorCode::kInput, "scenario has no agents");
  if (static_cast<int>(gains.size()) != n_agents || static_cast<int>(costs.size()) != n_agents ||
      static_cast<int>(x0.size()) != n_agents) {
    throw Error(ErrorCode::kDimension, "scenario: agents, gains, costs and initial states must have equal counts");
  }
  const int q = agents.front().q();
  for (int i = 0; i < n_agents; ++i) {
    const std::string who = "agent " + std::to_string(i + 1);
    const auto& m = agents[i];
    const auto& g = gains[i];
    m.validate(i);
    if (m.q() != q) throw Error(ErrorCode::kDimension, who + ": output dimension differs from agent 1");
    if (g.k.rows() != m.p() || g.k.cols() != m.n()) throw Error(ErrorCode::kDimension, who + ": K must be p x n");
    if (g.u.rows() != m.p() || g.u.cols() != q || g.w.rows() != m.p() || g.w.cols() != q || g.x.rows() != m.n() ||
        g.x.cols() != q) {
      throw Error(ErrorCode::kDimension, who + ": U, W must be p x q and X must be n x q");
    }
    if (costs[i].dim() != q) throw Error(ErrorCode::kDimension, who + ": cost dimension differs from q");
    if (x0[i].size() != m.n()) throw Error(ErrorCode::kDimension, who + ": initial state must have n entries");
    if (!check_rank_condition(m).satisfied) throw Error(ErrorCode::kNoSolution, who + ": rank condition fails");
    const auto res = regulator_residuals(m, g.u, g.w, g.x);
    if (!(res.max() <= 1e-8)) {
      throw Error(ErrorCode::kNoSolution, who + ": (U, W, X) residual " + std::to_string(res.max()) + " exceeds 1e-8");
    }
    const double margin = hurwitz_margin(closed_loop(m, g.k));
    if (!(margin < 0.0)) {
      throw Error(ErrorCode::kNotHurwitz, who + ": A - B K is not Hurwitz (max Re = " + std::to_string(margin) + ")");
    }
  }
  if (topology.num_agents() != n_agents) throw Error(ErrorCode::kDimension, "topology size differs from agent count");
  if (generator.num_states() != topology.num_modes()) {
    throw Error(ErrorCode::kDimension, "generator size differs from the number of topology modes");
  }
  if (initial_distribution.size() != generator.num_states()) {
    throw Error(ErrorCode::kDimension, "initial distribution size differs from the number of modes");
  }
  protocol.validate();
  if (static_cast<int>(delay.bound.size()) != n_agents) {
    throw Error(ErrorCode::kDimension, "delay bounds must be given per agent");
  }
  for (double b : delay.bound) {
    if (!(b >= 0.0)) throw Error(ErrorCode::kInput, "delay bounds must be nonnegative");
  }
  if (!(sim.dt > 0.0) || !(sim.horizon > 0.0)) throw Error(ErrorCode::kInput, "sim: dt and horizon must be positive");
}

DivergenceError::DivergenceError(double time, Trajectory partial)
    : Error(ErrorCode::kDivergence, "state diverged at t=" + std::to_string(time)),
      time_(time),
      partial_(std::move(partial)) {}

Matrix stacked_closed_loop(const Scenario& sc) {
  std::vector<Matrix> blocks;
  for (int i = 0; i < sc.num_agents(); ++i) blocks.push_back(closed_loop(sc.agents[i], sc.gains[i].k));
  return block_diag(blocks);
}

namespace {

void record(Trajectory& tr, std::size_t k, double t, int mode, const Vector& s, const Scenario& sc,
            const StateLayout& L, const std::vector<AgentRates>& rates) {
  tr.time[k] = t;
  tr.mode[k] = mode;
  tr.state.row(k) = s.transpose();
  int p_off = 0, n_off = 0;
  for (int i = 0; i < sc.num_agents(); ++i) {
    const auto& m = sc.agents[i];
    const Vector x = s.segment(L.x_offset[i], L.n[i]);
    const Vector eta = s.segment(L.eta_offset[i], L.q);
    tr.y.row(k).segment(i * L.q, L.q) = (m.c * x).transpose();
    tr.u.row(k).segment(p_off, m.p()) = rates[i].u.transpose();
    tr.v.row(k).segment(i * L.q, L.q) = rates[i].v.transpose();
    tr.xi.row(k).segment(n_off, m.n()) = (x - sc.gains[i].x * eta).transpose();
    p_off += m.p();
    n_off += m.n();
  }
}

Trajectory truncated(const Trajectory& tr, std::size_t rows) {
  Trajectory out = tr;
  out.time.resize(rows);
  out.mode.resize(rows);
  out.state.conservativeResize(static_cast<Eigen::Index>(rows), Eigen::NoChange);
  out.y.conservativeResize(static_cast<Eigen::Index>(rows), Eigen::NoChange);
  out.u.conservativeResize(static_cast<Eigen::Index>(rows), Eigen::NoChange);
  out.v.conservativeResize(static_cast<Eigen::Index>(rows), Eigen::NoChange);
  out.xi.conservativeResize(static_cast<Eigen::Index>(rows), Eigen::NoChange);
  return out;
}

}  // namespace

Trajectory integrate(const Scenario& sc) {
  const ModePath path = sample_mode_path(sc.generator, sc.initial_distribution, sc.sim.horizon, sc.sim.seed);
  return integrate(sc, path);
}

Trajectory integrate(const Scenario& sc, const ModePath& path) {
  sc.validate();
  const StateLayout L(sc.agents);
  const int n_agents = sc.num_agents();
  const double dt = sc.sim.dt;
  const auto steps = static_cast<std::size_t>(std::llround(sc.sim.horizon / dt));
  const double dbar = sc.delay.max_bound();
  if (dbar > 0.0 && dt > sc.delay.min_positive_bound() / 10.0 * (1.0 + 1e-12)) {
    throw Error(ErrorCode::kInput, "sim: dt must be at most one tenth of the smallest positive delay bound");
  }

  std::vector<Matrix> adjacency;
  for (const auto& m : sc.topology.modes()) adjacency.push_back(m.adjacency());

  int sum_n = 0, sum_p = 0;
  for (const auto& a : sc.agents) {
    sum_n += a.n();
    sum_p += a.p();
  }
  Trajectory tr;
  tr.dt = dt;
  tr.num_agents = n_agents;
  tr.q = L.q;
  tr.time.resize(steps + 1);
  tr.mode.resize(steps + 1);
  tr.state.resize(static_cast<Eigen::Index>(steps + 1), L.dim);
  tr.y.resize(static_cast<Eigen::Index>(steps + 1), n_agents * L.q);
  tr.u.resize(static_cast<Eigen::Index>(steps + 1), sum_p);
  tr.v.resize(static_cast<Eigen::Index>(steps + 1), n_agents * L.q);
  tr.xi.resize(static_cast<Eigen::Index>(steps + 1), sum_n);

  Vector s = Vector::Zero(L.dim);
  for (int i = 0; i < n_agents; ++i) s.segment(L.x_offset[i], L.n[i]) = sc.x0[i];

  HistoryBuffer history(0.0, dt, dbar + 2.0 * dt, s);
  std::vector<Vector> delayed(n_agents, s);
  std::vector<AgentRates> rates;
  Vector k1, k2, k3, k4, stage;

  const auto eval = [&](double t, const Vector& x, int mode, Vector& out, std::vector<AgentRates>* r) {
    for (int i = 0; i < n_agents; ++i) {
      const double lag = sc.delay.at(i, t);
      if (lag == 0.0) {
        delayed[i] = x;
      } else if (i > 0 && sc.delay.at(i - 1, t) == lag) {
        delayed[i] = delayed[i - 1];
      } else {
        history.sample(t - lag, delayed[i]);
      }
    }
    const kernels::StageInput in{sc, L, adjacency[mode], x, delayed};
    if (sc.sim.policy == ExecPolicy::kParallel) {
      kernels::stage_rates_parallel(in, out, r);
    } else {
      kernels::stage_rates_serial(in, out, r);
    }
  };

  history.push(s);
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    const int mode = path.mode_at(t);
    eval(t, s, mode, k1, &rates);
    history.set_newest_derivative(k1);
    record(tr, k, t, mode, s, sc, L, rates);
    if (k == steps) break;

    stage = s + 0.5 * dt * k1;
    eval(t + 0.5 * dt, stage, mode, k2, nullptr);
    stage = s + 0.5 * dt * k2;
    eval(t + 0.5 * dt, stage, mode, k3, nullptr);
    stage = s + dt * k3;
    eval(t + dt, stage, mode, k4, nullptr);
    s += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double norm = s.norm();
    if (!std::isfinite(norm) || norm > kDivergenceNorm) {
      throw DivergenceError(t + dt, truncated(tr, k + 1));
    }
    history.push(s);
  }
  return tr;
}

Metrics metrics(const Trajectory& tr, const Vector& theta_star, double tol) {
  Metrics m;
  const auto rows = tr.size();
  if (rows == 0) throw Error(ErrorCode::kInput, "metrics: empty trajectory");
  m.per_agent_error.resize(static_cast<Eigen::Index>(rows), tr.num_agents);
  std::optional<std::size_t> last_bad;
  for (std::size_t k = 0; k < rows; ++k) {
    double worst = 0.0;
    for (int i = 0; i < tr.num_agents; ++i) {
      const double e = (tr.y_of(k, i) - theta_star).norm();
      m.per_agent_error(static_cast<Eigen::Index>(k), i) = e;
      worst = std::max(worst, e);
    }
    if (worst > tol) last_bad = k;
  }
  m.final_error = m.per_agent_error.row(static_cast<Eigen::Index>(rows - 1)).maxCoeff();
  if (!last_bad) {
    m.convergence_time = tr.time.front();
  } else if (*last_bad + 1 < rows) {
    m.convergence_time = tr.time[*last_bad + 1];
  }
  return m;
}

ResidualReport residual_invariant_report(const Trajectory& tr, const Matrix& atilde) {
  ResidualReport r;
  const auto rows = tr.size();
  if (rows < 3) return r;
  const double dt = tr.dt;
  double max_xi = 0.0;
  for (std::size_t k = 0; k < rows; ++k) max_xi = std::max(max_xi, tr.xi.row(k).norm());
  for (std::size_t k = 1; k + 1 < rows; ++k) {
    const Vector deriv = (tr.xi.row(k + 1) - tr.xi.row(k - 1)).transpose() / (2.0 * dt);
    const Vector defect = deriv - atilde * tr.xi.row(k).transpose();
    r.max_defect = std::max(r.max_defect, defect.norm());
  }
  const double a_norm = spectral_norm(atilde);
  r.threshold = 10.0 * dt * dt * a_norm * a_norm * a_norm * max_xi;
  r.within_threshold = r.max_defect <= r.threshold;

  // Exact propagation by repeated one-step exponentials; compare relative to
  // the exact value, floored at cancellation noise level of x - X eta.
  const Matrix step = expm(atilde * dt);
  Vector exact = tr.xi.row(0).transpose();
  const double state_scale = std::max(1.0, tr.state.cwiseAbs().maxCoeff());
  const double floor = 1e-9 * state_scale;
  for (std::size_t k = 0; k < rows; ++k) {
    if (k > 0) exact = step * exact;
    const double err = (tr.xi.row(k).transpose() - exact).norm();
    r.max_tracking_error = std::max(r.max_tracking_error, err / std::max(exact.norm(), floor));
  }
  return r;
}

}  // namespace dopt
