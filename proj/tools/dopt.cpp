// Batch front end: validate, solve gains, simulate, run the LMI test and
// reproduce the bundled three-agent study.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dopt/lmi.hpp"
#include "dopt/scenario.hpp"

namespace fs = std::filesystem;
using namespace dopt;

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kNumerical = 3 };

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInput:
    case ErrorCode::kIo:
      return kUsage;
    case ErrorCode::kDimension:
    case ErrorCode::kGenerator:
    case ErrorCode::kReducible:
    case ErrorCode::kNotHurwitz:
    case ErrorCode::kNoSolution:
    case ErrorCode::kInfeasible:
      return kValidation;
    case ErrorCode::kHistoryUnderflow:
    case ErrorCode::kDivergence:
    case ErrorCode::kResource:
    case ErrorCode::kUndecided:
      return kNumerical;
  }
  return kNumerical;
}

// One machine-parsable line: "<CODE>: <message>".
int fail(ErrorCode code, const std::string& msg) {
  std::string flat = msg;
  for (char& c : flat) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::cerr << to_string(code) << ": " << flat << "\n";
  return exit_code(code);
}

const char* status_name(FeasibilityResult::Status s) {
  switch (s) {
    case FeasibilityResult::Status::kFeasible: return "feasible";
    case FeasibilityResult::Status::kInfeasible: return "infeasible";
    case FeasibilityResult::Status::kUndecided: return "undecided";
  }
  return "?";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void print_metrics(std::ostream& os, const Metrics& m, double tol) {
  os << "final_error " << fmt(m.final_error) << "\n";
  os << "convergence_time(tol=" << fmt(tol) << ") "
     << (m.convergence_time ? fmt(*m.convergence_time) : std::string("none")) << "\n";
}

void print_residuals(std::ostream& os, const ResidualReport& r) {
  os << "xi_defect " << fmt(r.max_defect) << " threshold " << fmt(r.threshold) << " tracking "
     << fmt(r.max_tracking_error) << (r.within_threshold ? " ok" : " EXCEEDED") << "\n";
}

void print_feasibility(std::ostream& os, const FeasibilityResult& r) {
  os << "status " << status_name(r.status) << "\n";
  os << "best_slack " << fmt(r.best_slack) << " (max eigenvalue of Pi over modes)\n";
  os << "lower_bound " << fmt(r.lower_bound) << "\n";
  os << "eps1 " << fmt(r.kappa) << "\n";
  if (r.witness) {
    os << "witness mode " << r.witness->mode + 1 << " form " << fmt(r.witness->form_value)
       << " (positive for every positive definite choice of the decision matrices)\n";
  }
}

int run_simulation(Scenario sc, const fs::path& csv, double tol, std::ostream& report) {
  const auto opt = global_optimum(sc.costs);
  try {
    const Trajectory tr = integrate(sc);
    emit_trajectory_csv(tr, opt.theta_star, csv);
    print_metrics(report, metrics(tr, opt.theta_star, tol), tol);
    print_residuals(report, residual_invariant_report(tr, stacked_closed_loop(sc)));
    report << "trajectory " << csv.string() << "\n";
    return kOk;
  } catch (const DivergenceError& e) {
    if (e.partial().size() > 0) emit_trajectory_csv(e.partial(), opt.theta_star, csv);
    return fail(ErrorCode::kDivergence, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delayed distributed optimization over Markovian switching digraphs"};
  app.require_subcommand(1);
  bool parallel = false;
  app.add_flag("--parallel", parallel, "Use the OpenMP kernels");

  std::string file;
  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
  validate->add_option("file", file)->required();

  auto* gains = app.add_subcommand("gains", "Solve the regulator equations and print residuals");
  gains->add_option("file", file)->required();

  std::string out;
  double delay = -1.0, horizon = -1.0, tol = 0.05;
  std::int64_t seed = -1;
  auto* simulate = app.add_subcommand("simulate", "Integrate the closed loop and write a trajectory CSV");
  simulate->add_option("file", file)->required();
  simulate->add_option("--out", out, "CSV path")->required();
  simulate->add_option("--delay", delay, "Constant delay for every agent")->check(CLI::NonNegativeNumber);
  simulate->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed)->check(CLI::NonNegativeNumber);
  simulate->add_option("--tol", tol, "Convergence tolerance")->check(CLI::PositiveNumber);

  double dbar = 0.0;
  double varpi = -1.0;
  std::string variant;
  std::string cert_path = "certificate.txt";
  auto* analyze = app.add_subcommand("analyze", "LMI feasibility test at one delay bound");
  analyze->add_option("file", file)->required();
  analyze->add_option("--dbar", dbar)->required()->check(CLI::NonNegativeNumber);
  analyze->add_option("--varpi", varpi)->check(CLI::Range(0.0, 1.0));
  analyze->add_option("--variant", variant)->check(CLI::IsMember({"theorem1", "theorem2", "delay-free"}));
  analyze->add_option("--cert", cert_path, "Where a certificate is written when feasible");

  double dmax = -1.0, mtol = -1.0;
  auto* margin = app.add_subcommand("margin", "Bisect the largest certified delay bound");
  margin->add_option("file", file)->required();
  margin->add_option("--dmax", dmax)->check(CLI::NonNegativeNumber);
  margin->add_option("--tol", mtol)->check(CLI::PositiveNumber);

  std::string demo_delay;
  auto* demo = app.add_subcommand("demo", "Regenerate the bundled three-agent study for one delay");
  demo->add_option("--delay", demo_delay)->required()->check(CLI::IsMember({"0.1", "0.4", "0.7"}));
  demo->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    return fail(ErrorCode::kInput, e.what());
  }
  const ExecPolicy policy = parallel ? ExecPolicy::kParallel : ExecPolicy::kSerial;

  try {
    if (*validate) {
      const Scenario sc = parse_scenario(file);
      std::cout << "ok: " << sc.num_agents() << " agents, " << sc.topology.num_modes() << " modes, q = "
                << sc.output_dim() << "\n";
      return kOk;
    }

    if (*gains) {
      const Scenario sc = parse_scenario(file);
      double worst = 0.0;
      for (int i = 0; i < sc.num_agents(); ++i) {
        const auto sol = solve_regulator(sc.agents[i]);
        const auto given = regulator_residuals(sc.agents[i], sc.gains[i].u, sc.gains[i].w, sc.gains[i].x);
        std::cout << "agent " << i + 1 << ": solved residual " << fmt(sol.residuals.max())
                  << ", scenario gains residual " << fmt(given.max()) << " (BU-AX " << fmt(given.bu_minus_ax)
                  << ", BW-X " << fmt(given.bw_minus_x) << ", CX-I " << fmt(given.cx_minus_i) << ")\n";
        worst = std::max({worst, sol.residuals.max(), given.max()});
      }
      std::cout << "max residual " << fmt(worst) << "\n";
      return kOk;
    }

    if (*simulate) {
      Scenario sc = parse_scenario(file);
      if (delay >= 0.0) sc.delay = DelaySpec::constant(sc.num_agents(), delay);
      if (horizon > 0.0) sc.sim.horizon = horizon;
      if (seed >= 0) sc.sim.seed = static_cast<std::uint64_t>(seed);
      sc.sim.policy = policy;
      sc.validate();
      return run_simulation(std::move(sc), out, tol, std::cout);
    }

    if (*analyze) {
      const Scenario sc = parse_scenario(file);
      const LmiVariant v = parse_variant(variant.empty() ? sc.analysis.variant : variant);
      const LmiData data = make_lmi_data(sc, dbar, varpi >= 0.0 ? varpi : sc.analysis.varpi);
      LmiOptions opt;
      opt.solver.policy = policy;
      const auto r = solve_feasibility(data, v, opt);
      std::cout << "variant " << to_string(v) << " dbar " << fmt(dbar) << "\n";
      print_feasibility(std::cout, r);
      if (r.certificate) {
        std::ofstream os(cert_path);
        if (!os) return fail(ErrorCode::kIo, "cannot write " + cert_path);
        write_certificate(os, *r.certificate);
        std::cout << "certificate " << cert_path << "\n";
        return kOk;
      }
      return r.status == FeasibilityResult::Status::kInfeasible ? kValidation : kNumerical;
    }

    if (*margin) {
      const Scenario sc = parse_scenario(file);
      const LmiVariant v = parse_variant(sc.analysis.variant);
      const LmiData data = make_lmi_data(sc, 0.0, sc.analysis.varpi);
      LmiOptions opt;
      opt.solver.policy = policy;
      const auto m = delay_margin(data, v, dmax >= 0.0 ? dmax : sc.analysis.d_max, mtol > 0.0 ? mtol : sc.analysis.tol,
                                  opt);
      for (const auto& p : m.log) {
        std::cout << "probe dbar " << fmt(p.dbar) << " " << status_name(p.status) << " slack " << fmt(p.slack) << "\n";
      }
      std::cout << "d_star " << fmt(m.d_star) << "\n";
      if (m.d_fail) std::cout << "d_fail " << fmt(*m.d_fail) << "\n";
      return kOk;
    }

    if (*demo) {
      const double d = std::stod(demo_delay);
      Scenario sc = demo_scenario(d);
      sc.sim.policy = policy;
      const fs::path dir(out);
      fs::create_directories(dir);
      {
        std::ofstream js(dir / "scenario.json");
        if (!js) return fail(ErrorCode::kIo, "cannot write " + (dir / "scenario.json").string());
        js << scenario_to_json(sc);
      }
      std::ostringstream report;
      report << "delay " << demo_delay << "\n";
      const fs::path csv = dir / ("trajectory_d" + demo_delay + ".csv");
      const int rc = run_simulation(sc, csv, 0.05, report);
      if (rc != kOk) return rc;

      LmiOptions opt;
      opt.solver.policy = policy;
      const auto r = solve_feasibility(make_lmi_data(sc, d, 0.0), LmiVariant::kTheorem1, opt);
      report << "lmi variant theorem1 dbar " << demo_delay << "\n";
      print_feasibility(report, r);
      if (r.certificate) {
        const fs::path cp = dir / ("certificate_d" + demo_delay + ".txt");
        std::ofstream os(cp);
        write_certificate(os, *r.certificate);
        report << "certificate " << cp.string() << "\n";
      }
      const fs::path rp = dir / "report.txt";
      std::ofstream(rp) << report.str();
      std::cout << report.str() << "report " << rp.string() << "\n";
      return kOk;
    }
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(ErrorCode::kIo, e.what());
  } catch (const std::exception& e) {
    return fail(ErrorCode::kInput, e.what());
  }
  return kUsage;
}
