#include <cmath>

#include "doctest.h"
#include "dopt/error.hpp"
#include "dopt/history.hpp"
#include "support.hpp"

using namespace dopt;
using namespace dopt::testing;

namespace {

double final_state_distance(const Trajectory& a, const Trajectory& b) {
  return (a.state.bottomRows(1) - b.state.bottomRows(1)).norm();
}

}  // namespace

TEST_CASE("history buffer: Hermite lookups reproduce cubics and honour the window") {
  const double dt = 0.1;
  auto f = [](double t) { return 1.0 - 2.0 * t + 0.5 * t * t + 0.3 * t * t * t; };
  auto df = [](double t) { return -2.0 + t + 0.9 * t * t; };
  HistoryBuffer h(0.0, dt, 0.5, vec({f(0.0)}));
  h.push(vec({f(0.0)}));
  h.set_newest_derivative(vec({df(0.0)}));
  for (int k = 1; k <= 20; ++k) {
    h.push(vec({f(k * dt)}));
    h.set_newest_derivative(vec({df(k * dt)}));
  }
  Vector out;
  for (double t : {1.55, 1.61, 1.999, 2.0}) {
    h.sample(t, out);
    CHECK(out(0) == doctest::Approx(f(t)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(h.sample(0.5, out), Error);

  HistoryBuffer fresh(0.0, dt, 1.0, vec({7.0}));
  fresh.sample(-0.3, out);  // constant initial history
  CHECK(out(0) == 7.0);
}

TEST_CASE("single agent gradient flow settles at its own optimum") {
  Scenario sc = single_agent(3.0);
  sc.sim.horizon = 20.0;
  const auto tr = integrate(sc);
  CHECK(std::abs(tr.y(tr.size() - 1, 0) - 3.0) < 1e-3);
}

TEST_CASE("bundled example: small delay converges, large delay does not") {
  const Vector star = vec({2.8});
  const auto small = metrics(integrate(demo_scenario(0.1)), star, 0.05);
  REQUIRE(small.convergence_time.has_value());
  CHECK(*small.convergence_time <= 10.0);
  CHECK(small.final_error <= 0.05);

  const auto large = metrics(integrate(demo_scenario(0.7)), star, 0.05);
  CHECK_FALSE(large.convergence_time.has_value());
  CHECK(large.final_error >= 10.0 * small.final_error);
}

TEST_CASE("equilibrium conditions hold at a reported convergence") {
  const Scenario sc = demo_scenario(0.1);
  const auto tr = integrate(sc);
  const double tol = 0.05;
  const auto m = metrics(tr, vec({2.8}), tol);
  REQUIRE(m.convergence_time.has_value());
  const std::size_t last = tr.size() - 1;
  double grad = 0.0, spread = 0.0;
  for (int i = 0; i < 3; ++i) {
    grad += sc.costs[i].gradient(tr.y_of(last, i))(0);
    for (int j = 0; j < 3; ++j) spread = std::max(spread, (tr.y_of(last, i) - tr.y_of(last, j)).norm());
  }
  CHECK(std::abs(grad) <= 10.0 * tol * lipschitz_max(sc.costs));
  CHECK(spread <= 2.0 * tol);
}

TEST_CASE("metrics on a constant optimal trajectory") {
  Trajectory tr;
  tr.dt = 0.5;
  tr.num_agents = 2;
  tr.q = 1;
  tr.time = {0.0, 0.5, 1.0};
  tr.mode = {0, 0, 0};
  tr.y = Matrix::Constant(3, 2, 2.8);
  const auto m = metrics(tr, vec({2.8}), 1e-9);
  REQUIRE(m.convergence_time.has_value());
  CHECK(*m.convergence_time == 0.0);
  CHECK(m.final_error == 0.0);
  CHECK_THROWS_AS(metrics(Trajectory{}, vec({2.8}), 0.1), Error);
}

TEST_CASE("residual xi follows exp(A t) xi(0) for every delay") {
  for (double d : {0.1, 0.4, 0.7}) {
    const Scenario sc = demo_scenario(d);
    const auto tr = integrate(sc);
    const Matrix at = stacked_closed_loop(sc);
    const auto rep = residual_invariant_report(tr, at);
    CHECK(rep.within_threshold);
    CHECK(rep.max_defect <= rep.threshold);
    CHECK(rep.max_tracking_error <= 1e-4);
    // Spot check against the closed form at t = 1.
    const Vector xi0 = tr.xi.row(0).transpose();
    const Vector expect = expm(at * 1.0) * xi0;
    const Vector got = tr.xi.row(1000).transpose();
    CHECK((got - expect).norm() <= 1e-4 * expect.norm());
  }
}

TEST_CASE("single agent with zero input: xi decays like exp(A t)") {
  Scenario sc = single_agent(0.0);
  sc.x0[0] = vec({0.0, 0.0});
  // Zero state with target 0 keeps eta at 0, so xi = x and x stays at 0;
  // shift the plant state instead and check the residual flow.
  sc.x0[0] = vec({1.0, -0.5});
  sc.sim.horizon = 2.0;
  const auto tr = integrate(sc);
  const auto rep = residual_invariant_report(tr, stacked_closed_loop(sc));
  CHECK(rep.max_tracking_error <= 1e-6);
}

TEST_CASE("determinism and serial/parallel agreement") {
  Scenario sc = demo_scenario(0.4);
  sc.sim.horizon = 3.0;
  const auto a = integrate(sc);
  const auto b = integrate(sc);
  CHECK(a.state == b.state);
  CHECK(a.mode == b.mode);
  sc.sim.policy = ExecPolicy::kParallel;
  const auto c = integrate(sc);
  CHECK(a.state == c.state);
  CHECK(a.u == c.u);
  CHECK(a.v == c.v);
}

TEST_CASE("step halving on the smooth example shows fourth-order convergence") {
  Scenario sc = smooth_demo(0.4);
  sc.sim.horizon = 4.0;
  std::vector<Trajectory> runs;
  for (double dt : {0.02, 0.01, 0.005}) {
    sc.sim.dt = dt;
    runs.push_back(integrate(sc));
  }
  const double ratio = final_state_distance(runs[0], runs[1]) / final_state_distance(runs[1], runs[2]);
  MESSAGE("step-halving ratio " << ratio);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("sinusoidal delays integrate and stay within the bound") {
  Scenario sc = demo_scenario(0.2);
  sc.delay.kind = DelaySpec::Kind::kSinusoidal;
  sc.delay.omega = 2.0;
  sc.sim.horizon = 3.0;
  for (double t : {0.0, 0.3, 1.7, 2.9}) {
    CHECK(sc.delay.at(0, t) >= 0.0);
    CHECK(sc.delay.at(0, t) <= 0.2);
  }
  CHECK(sc.delay.rate_bound(0) == doctest::Approx(0.2));
  const auto tr = integrate(sc);
  CHECK(tr.size() == 3001);
  CHECK(residual_invariant_report(tr, stacked_closed_loop(sc)).within_threshold);
}

TEST_CASE("step size must resolve the smallest delay") {
  Scenario sc = demo_scenario(0.1);
  sc.sim.dt = 0.02;
  try {
    integrate(sc);
    FAIL("expected a step-size error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInput);
  }
}

TEST_CASE("blow-up aborts with the time and the partial trajectory") {
  Scenario sc = demo_scenario(0.7);
  sc.protocol.beta = 40.0;
  sc.sim.horizon = 60.0;
  try {
    integrate(sc);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.code() == ErrorCode::kDivergence);
    CHECK(e.time() > 0.0);
    CHECK(e.partial().size() >= 1);
    CHECK(e.partial().time.back() <= e.time());
  }
}
