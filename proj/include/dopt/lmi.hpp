#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dopt/exec.hpp"
#include "dopt/linalg.hpp"
#include "dopt/sdp.hpp"

namespace dopt {

struct Scenario;

enum class LmiVariant { kTheorem1, kTheorem2, kDelayFree };

LmiVariant parse_variant(const std::string& name);  // "theorem1" | "theorem2" | "delay-free"
std::string to_string(LmiVariant v);

/// Everything the block matrix Pi depends on besides the decision matrices.
struct LmiData {
  Matrix a_tilde;                  // blockdiag(A_i - B_i K_i)
  Matrix c;                        // blockdiag(C_i)
  Matrix x;                        // blockdiag(X_i)
  std::vector<Matrix> laplacians;  // L_p (x) I_q, one per mode
  double alpha = 1.0;
  double beta = 1.0;
  double dbar = 0.0;
  double varpi = 0.0;
  double l_max = 0.0;
  Vector pi;  // stationary mode distribution
  int q = 1;

  int n() const { return static_cast<int>(a_tilde.rows()); }
  int nq() const { return static_cast<int>(c.rows()); }
  int num_modes() const { return static_cast<int>(laplacians.size()); }

  /// Hurwitz a_tilde, varpi in [0, 1), dbar >= 0, C X = I within 1e-8.
  void validate() const;
};

LmiData make_lmi_data(const Scenario& sc, double dbar, double varpi);

struct DecisionVars {
  Matrix pa, p1, p2, p3, p4, q1, q2, q3;
};

struct PaChoice {
  Matrix pa;
  double eps1 = 1.0;
};

/// P_a = kappa * P0 with P0 A + A^T P0 = -I, so O = kappa I and eps1 = kappa.
PaChoice fix_pa(const Matrix& a_tilde, double kappa = 1.0);

/// Pi_p over [xi; w; w(t-dbar); w(t-d); y; y(t-dbar); y(t-d); F]. The
/// theorem2 variant zeroes P3, Q2 and drops the (1 - varpi) factors; the
/// delay-free variant collapses the delayed copies onto the current state
/// at dbar = 0, keeping [xi; w; y; F] and only P1 besides P_a.
Matrix assemble_pi(const LmiData& data, const DecisionVars& vars, int mode, double eps1,
                   LmiVariant variant = LmiVariant::kTheorem1);

/// Names of the decision matrices that are free in a variant (P_a excluded).
std::vector<std::string> active_matrices(LmiVariant variant);

struct FeasibilityCertificate {
  DecisionVars vars;
  std::vector<double> lambda_max;  // per mode
  double mu = 1e-6;
  double dbar = 0.0;
  double varpi = 0.0;
  double eps1 = 1.0;
  LmiVariant variant = LmiVariant::kTheorem1;
};

/// A direction Phi with Phi^T Pi_p Phi > 0 at the zero decision point and
/// Phi^T Pi_p Phi = c + sum_M tr(M S_M) with every S_M >= 0, so no positive
/// definite choice of the decision matrices can make Pi_p negative.
struct InfeasibilityWitness {
  Vector direction;
  int mode = 0;
  double form_value = 0.0;       // Phi^T Pi_p Phi with all decision matrices zero
  double min_sensitivity = 0.0;  // min over M of lambda_min(S_M)
};

struct LmiOptions {
  double mu = 1e-6;
  double bound = 1e4;         // box P <= bound * I keeps the search compact
  bool search_kappa = true;   // scale P_a (and eps1) by golden-section search
  double kappa = 1.0;         // used when search_kappa is false
  int kappa_iterations = 16;
  sdp::Options solver;
};

struct FeasibilityResult {
  enum class Status { kFeasible, kInfeasible, kUndecided };
  Status status = Status::kUndecided;
  std::optional<FeasibilityCertificate> certificate;
  double best_slack = 0.0;   // smallest max_p lambda_max(Pi_p) found
  double lower_bound = 0.0;  // certified bound at the best kappa
  double kappa = 1.0;
  int newton_steps = 0;
  std::optional<InfeasibilityWitness> witness;
};

FeasibilityResult solve_feasibility(const LmiData& data, LmiVariant variant, const LmiOptions& options = {},
                                    const DecisionVars* warm_start = nullptr);

struct CertificateReport {
  std::vector<double> lambda_max;                            // per mode
  std::vector<std::pair<std::string, double>> lambda_min;   // per PD matrix
  std::vector<int> failing_modes;
  bool pass = false;
};

/// Re-assembles every Pi_p and checks the strict signs with margin mu / 2
/// using a dense symmetric eigendecomposition.
CertificateReport check_certificate(const LmiData& data, const FeasibilityCertificate& cert);

/// Searches for a decision-independent positive direction built from the
/// consensus vector 1 (x) v in the output blocks. Returns nullopt if none.
std::optional<InfeasibilityWitness> find_structural_witness(const LmiData& data, LmiVariant variant, double eps1);

struct MarginProbe {
  double dbar = 0.0;
  FeasibilityResult::Status status = FeasibilityResult::Status::kUndecided;
  double slack = 0.0;
};

struct MarginResult {
  double d_star = 0.0;                   // largest certified dbar
  std::optional<double> d_fail;          // smallest infeasible / undecided dbar
  std::vector<MarginProbe> log;          // probes in evaluation order
};

using MarginOracle = std::function<MarginProbe(double)>;

/// Bisection on [0, d_max] to width tol. Throws kInfeasible when the oracle
/// does not certify dbar = 0.
MarginResult bisect_margin(const MarginOracle& oracle, double d_max, double tol);

MarginResult delay_margin(const LmiData& data, LmiVariant variant, double d_max, double tol,
                          const LmiOptions& options = {});

/// True when every certified dbar in the log lies below every failed one.
bool log_is_monotone(const std::vector<MarginProbe>& log);

struct Lemma2Result {
  double lhs = 0.0;  // d_m * integral of Zdot^T R Zdot over [t - d_m, t]
  double rhs = 0.0;  // quadratic form in (Z(t), Z(t - d_m), Z(t - d))
  bool holds = false;
};

/// Jensen-type bound -lhs <= rhs, integral by the trapezoid rule.
Lemma2Result lemma2_numeric_check(const Matrix& r1, const std::function<Vector(double)>& z,
                                  const std::function<Vector(double)>& zdot, double t, double d_m, double d_of_t,
                                  int samples = 20001);

/// Plain-text certificate: header lines, each matrix row-major in full
/// symmetric storage, then per-mode lambda_max.
void write_certificate(std::ostream& os, const FeasibilityCertificate& cert);

}  // namespace dopt
