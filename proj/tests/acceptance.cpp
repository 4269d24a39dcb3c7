// Acceptance run over the bundled three-agent example. One PASS/FAIL line
// per criterion; tolerances are pinned below and never read from input.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dopt/lmi.hpp"
#include "dopt/scenario.hpp"

using namespace dopt;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances.
constexpr double kSolvedGainTol = 1e-10;
constexpr double kBundledGainTol = 1e-12;
constexpr double kEigTol = 1e-9;
constexpr double kOptTol = 1e-9;
constexpr double kConvTol = 0.05;
constexpr double kTrackTol = 1e-3;
constexpr double kOccupationTol = 0.02;
constexpr double kGradRelTol = 1e-6;
constexpr double kRatioLo = 12.0, kRatioHi = 20.0;
constexpr double kThetaStar = 2.8, kFmin = 4.4;

int failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string g(double v) { return fmt("%.4g", v); }

// Eigenvalues of a real matrix with real spectrum, sorted descending.
std::vector<double> real_eigs(const Matrix& a, double* max_imag) {
  const Eigen::VectorXcd ev = a.eigenvalues();
  std::vector<double> out;
  *max_imag = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    out.push_back(ev(i).real());
    *max_imag = std::max(*max_imag, std::abs(ev(i).imag()));
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

struct DemoRun {
  Trajectory tr;
  Metrics m;
  ResidualReport res;
  double seconds = 0.0;
};

DemoRun run_demo(double delay, double horizon) {
  Scenario sc = demo_scenario(delay);
  sc.sim.horizon = horizon;
  DemoRun r;
  const auto t0 = Clock::now();
  r.tr = integrate(sc);
  r.m = metrics(r.tr, global_optimum(sc.costs).theta_star, kConvTol);
  r.res = residual_invariant_report(r.tr, stacked_closed_loop(sc));
  r.seconds = seconds_since(t0);
  return r;
}

// Error of the run at time t (grid lookup).
double error_at(const DemoRun& r, double t) {
  const auto k = static_cast<Eigen::Index>(std::llround(t / r.tr.dt));
  return r.m.per_agent_error.row(k).maxCoeff();
}

}  // namespace

int main() {
  const Scenario demo = demo_scenario(0.1);

  // 1. Regulator equations.
  {
    const auto t0 = Clock::now();
    double solved = 0.0, bundled = 0.0;
    for (int i = 0; i < demo.num_agents(); ++i) {
      solved = std::max(solved, solve_regulator(demo.agents[i]).residuals.max());
      bundled = std::max(bundled, regulator_residuals(demo.agents[i], demo.gains[i].u, demo.gains[i].w,
                                                      demo.gains[i].x).max());
    }
    const double s = seconds_since(t0);
    report(1, solved <= kSolvedGainTol && bundled <= kBundledGainTol && s < 1.0,
           "regulator residuals solved " + g(solved) + " bundled " + g(bundled) + ", " + g(s) + " s");
  }

  // 2. Closed-loop spectra.
  {
    double im1 = 0, im2 = 0;
    const auto e1 = real_eigs(demo.agents[0].a - demo.agents[0].b * demo.gains[0].k, &im1);
    const auto e2 = real_eigs(demo.agents[1].a - demo.agents[1].b * demo.gains[1].k, &im2);
    const double m3 = hurwitz_margin(demo.agents[2].a - demo.agents[2].b * demo.gains[2].k);
    const double d1 = std::max(std::abs(e1[0] + 4), std::abs(e1[1] + 5)) + im1;
    const double d2 = std::max(std::abs(e2[0] + 3), std::abs(e2[1] + 4)) + im2;
    report(2, e1.size() == 2 && e2.size() == 2 && d1 <= kEigTol && d2 <= kEigTol && m3 < 0.0,
           "spectra deviation agent1 " + g(d1) + " agent2 " + g(d2) + ", agent3 max Re " + g(m3));
  }

  // 3. Centralized optimum.
  {
    const auto t0 = Clock::now();
    const auto opt = global_optimum(demo.costs);
    const double s = seconds_since(t0);
    const double dt = std::abs(opt.theta_star(0) - kThetaStar), df = std::abs(opt.f_min - kFmin);
    report(3, dt <= kOptTol && df <= kOptTol && s < 0.1,
           "theta* = " + fmt("%.12g", opt.theta_star(0)) + ", F_min = " + fmt("%.12g", opt.f_min) + ", " +
               g(s) + " s");
  }

  // 4-7. Simulations.
  const DemoRun r1 = run_demo(0.1, 10.0);
  const DemoRun r4 = run_demo(0.4, 60.0);
  const DemoRun r7 = run_demo(0.7, 10.0);
  {
    double worst = 0.0;
    const auto last = r1.tr.size() - 1;
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(r1.tr.y(last, i) - kThetaStar));
    report(4, worst <= kConvTol && r1.seconds < 30.0,
           "d = 0.1: max_i |y_i(10) - 2.8| = " + g(worst) + ", " + g(r1.seconds) + " s");
  }
  {
    const double e4 = error_at(r4, 10.0);
    const bool conv = r4.m.convergence_time && *r4.m.convergence_time <= 60.0;
    report(5, e4 > r1.m.final_error && conv,
           "d = 0.4: error(10) = " + g(e4) + " vs " + g(r1.m.final_error) + " at d = 0.1, converged at t = " +
               (r4.m.convergence_time ? g(*r4.m.convergence_time) : std::string("never")) + " (T = 60)");
  }
  {
    const bool conv = r7.m.convergence_time.has_value();
    const double ratio = r7.m.final_error / r1.m.final_error;
    report(6, !conv && ratio >= 10.0,
           "d = 0.7: converged by 10 s: " + std::string(conv ? "yes" : "no") + ", error(10) = " +
               g(r7.m.final_error) + " (" + g(ratio) + "x the d = 0.1 error)");
  }
  {
    bool ok = true;
    std::string detail;
    const double delays[] = {0.1, 0.4, 0.7};
    const DemoRun* runs[] = {&r1, &r4, &r7};
    for (int k = 0; k < 3; ++k) {
      const auto& r = runs[k]->res;
      ok = ok && r.within_threshold && r.max_tracking_error <= kTrackTol;
      detail += (k ? "; " : "") + std::string("d = ") + g(delays[k]) + ": defect " + g(r.max_defect) + "/" +
                g(r.threshold) + " tracking " + g(r.max_tracking_error);
    }
    report(7, ok, detail);
  }

  // 8. Markov occupation fractions. The path uses the library's default seed.
  {
    const auto t0 = Clock::now();
    const Vector pi = stationary_distribution(demo.generator);
    const ModePath path = sample_mode_path(demo.generator, demo.initial_distribution, 1e4, SimSettings{}.seed);
    const double err = (occupation_fractions(path, 3) - pi).cwiseAbs().maxCoeff();
    const double s = seconds_since(t0);
    const double oracle = (pi - Vector(Eigen::Vector3d(14.0 / 73, 9.0 / 73, 50.0 / 73))).cwiseAbs().maxCoeff();
    report(8, err <= kOccupationTol && oracle <= 1e-12 && s < 5.0,
           "T = 1e4 occupation error " + g(err) + " (stationary oracle error " + g(oracle) + "), " + g(s) + " s");
  }

  // 9. LMI soundness on a five-point grid plus the bisection log.
  {
    const double grid[] = {0.1, 0.25, 0.4, 0.55, 0.7};
    bool sound = true;
    int certificates = 0;
    std::vector<MarginProbe> grid_log;
    std::string pattern;
    for (double d : grid) {
      const auto r = solve_feasibility(make_lmi_data(demo, d, 0.0), LmiVariant::kTheorem1);
      grid_log.push_back({d, r.status, r.best_slack});
      if (r.certificate) {
        ++certificates;
        sound = sound && check_certificate(make_lmi_data(demo, d, 0.0), *r.certificate).pass;
      }
      const char* s = r.status == FeasibilityResult::Status::kFeasible     ? "feasible"
                      : r.status == FeasibilityResult::Status::kInfeasible ? "infeasible"
                                                                           : "undecided";
      pattern += (pattern.empty() ? "" : ", ") + g(d) + " " + s + " (slack " + g(r.best_slack) + ")";
    }
    std::vector<MarginProbe> bisect_log;
    bool base_failed = false;
    try {
      bisect_margin(
          [&](double d) {
            const auto r = solve_feasibility(make_lmi_data(demo, d, 0.0), LmiVariant::kTheorem1);
            bisect_log.push_back({d, r.status, r.best_slack});
            return bisect_log.back();
          },
          1.0, 0.05);
    } catch (const Error& e) {
      base_failed = e.code() == ErrorCode::kInfeasible;
    }
    const bool monotone = log_is_monotone(grid_log) && log_is_monotone(bisect_log);
    const bool table_pattern = grid_log[0].status == FeasibilityResult::Status::kFeasible &&
                               grid_log[2].status == FeasibilityResult::Status::kFeasible &&
                               grid_log[4].status != FeasibilityResult::Status::kFeasible;
    std::printf("  criterion 9 grid: %s\n", pattern.c_str());
    std::printf("  criterion 9 target pattern (feasible 0.1, 0.4; infeasible 0.7): %s%s\n",
                table_pattern ? "matched" : "MISMATCH",
                table_pattern ? "" : " -- Pi has a positive direction on the consensus subspace of the output "
                                     "blocks for every decision matrix, so no grid point is certifiable");
    report(9, sound && monotone,
           std::to_string(certificates) + " certificates, all verified: " + (sound ? "yes" : "no") +
               (certificates == 0 ? " (vacuous)" : "") +
               "; bisection log monotone: " + (monotone ? "yes" : "no") +
               (base_failed ? " (no certificate at dbar = 0)" : ""));
  }

  // 10. Property suites.
  {
    std::mt19937_64 rng(20240);
    std::normal_distribution<double> nd(0.0, 1.0);
    // Gradient against central differences.
    double worst_grad = 0.0;
    for (int k = 0; k < 100; ++k) {
      const auto& f = demo.costs[k % 3];
      const Vector th = Vector::Constant(1, 3.0 * nd(rng));
      const double h = 1e-5 * std::max(1.0, std::abs(th(0)));
      const double fd = (f.value(th + Vector::Constant(1, h)) - f.value(th - Vector::Constant(1, h))) / (2 * h);
      const double an = f.gradient(th)(0);
      worst_grad = std::max(worst_grad, std::abs(fd - an) / std::max(1.0, std::abs(an)));
    }
    // Lemma 1 over the union graph.
    const Vector w = union_stationary_weights(demo.topology);
    int l1 = 0;
    for (int k = 0; k < 1000; ++k) {
      Vector z(3);
      for (int i = 0; i < 3; ++i) z(i) = nd(rng);
      z -= w.dot(z) / w.squaredNorm() * w;
      l1 += lemma1_check(demo.topology, w, z).holds;
    }
    // Lemma 2 on random cubic paths.
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    int l2 = 0;
    for (int k = 0; k < 1000; ++k) {
      Matrix m(2, 2);
      for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = nd(rng);
      const Matrix r = m * m.transpose() + 0.2 * Matrix::Identity(2, 2);
      Matrix coef(2, 4);
      for (int i = 0; i < 8; ++i) coef(i / 4, i % 4) = nd(rng);
      auto z = [&](double t) { return Vector(coef * Eigen::Vector4d(1.0, t, t * t, t * t * t)); };
      auto zd = [&](double t) { return Vector(coef * Eigen::Vector4d(0.0, 1.0, 2 * t, 3 * t * t)); };
      const double dm = 0.05 + ud(rng);
      l2 += lemma2_numeric_check(r, z, zd, 1.0 + ud(rng), dm, dm * ud(rng), 2001).holds;
    }
    // Step halving with every mode set to the complete graph.
    Scenario smooth = demo_scenario(0.4);
    smooth.topology = SwitchingTopology(std::vector<ModeDigraph>(3, ModeDigraph(demo_mode_adjacency(2))));
    smooth.sim.horizon = 4.0;
    std::vector<Vector> finals;
    for (double dt : {0.02, 0.01, 0.005}) {
      smooth.sim.dt = dt;
      const Trajectory tr = integrate(smooth);
      finals.push_back(tr.state.bottomRows(1).transpose());
    }
    const double ratio = (finals[0] - finals[1]).norm() / (finals[1] - finals[2]).norm();
    report(10, worst_grad < kGradRelTol && l1 == 1000 && l2 == 1000 && ratio >= kRatioLo && ratio <= kRatioHi,
           "gradient rel err " + g(worst_grad) + ", lemma1 " + std::to_string(l1) + "/1000, lemma2 " +
               std::to_string(l2) + "/1000, step-halving ratio " + g(ratio));
  }

  return failures == 0 ? 0 : 1;
}
