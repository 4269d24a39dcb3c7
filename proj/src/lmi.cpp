#include "dopt/lmi.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "dopt/error.hpp"
#include "dopt/graph.hpp"
#include "dopt/markov.hpp"
#include "dopt/objective.hpp"
#include "dopt/plant.hpp"
#include "dopt/sim.hpp"

namespace dopt {
namespace {

using Status = FeasibilityResult::Status;

constexpr int kBlocks = 8;

// Block sizes of the ordered state [xi; w; w(t-dbar); w(t-d); y; y(t-dbar); y(t-d); F].
std::vector<int> block_offsets(int n, int nq) {
  std::vector<int> off(kBlocks + 1, 0);
  off[1] = n;
  for (int b = 2; b <= kBlocks; ++b) off[b] = off[b - 1] + nq;
  return off;
}

// Pointers to each decision matrix by name, in a fixed order.
Matrix* slot(DecisionVars& v, const std::string& name) {
  if (name == "P1") return &v.p1;
  if (name == "P2") return &v.p2;
  if (name == "P3") return &v.p3;
  if (name == "P4") return &v.p4;
  if (name == "Q1") return &v.q1;
  if (name == "Q2") return &v.q2;
  if (name == "Q3") return &v.q3;
  if (name == "Pa") return &v.pa;
  throw Error(ErrorCode::kInput, "unknown decision matrix " + name);
}

const Matrix& slot(const DecisionVars& v, const std::string& name) {
  return *slot(const_cast<DecisionVars&>(v), name);
}

DecisionVars zero_vars(int n, int nq) {
  const Matrix z = Matrix::Zero(nq, nq);
  return {Matrix::Zero(n, n), z, z, z, z, z, z, z};
}

Matrix theorem1_pi(const LmiData& d, const DecisionVars& v, int mode, double eps1, double varpi) {
  const int n = d.n();
  const int nq = d.nq();
  const auto off = block_offsets(n, nq);
  const Matrix& at = d.a_tilde;
  const Matrix& lt = d.laplacians.at(mode);
  const Matrix bl = d.beta * lt;
  const Matrix abl = d.alpha * d.beta * lt;
  const Matrix dpi = kron(d.pi.asDiagonal().toDenseMatrix(), Matrix::Identity(d.q, d.q));
  const Matrix ca = d.c * at;
  const Matrix inq = Matrix::Identity(nq, nq);
  const double d2 = d.dbar * d.dbar;
  const double na = spectral_norm(at);
  const double npc = std::pow(spectral_norm(dpi * d.c), 2);

  Matrix pi = Matrix::Zero(off[kBlocks], off[kBlocks]);
  auto put = [&](int r, int c, const Matrix& m) {
    pi.block(off[r - 1], off[c - 1], m.rows(), m.cols()) = m;
    if (r != c) pi.block(off[c - 1], off[r - 1], m.cols(), m.rows()) = m.transpose();
  };

  put(1, 1, v.pa * at + at.transpose() * v.pa + (na * na / (4.0 * eps1)) * Matrix::Identity(n, n) +
                d2 * ca.transpose() * v.q3 * ca);
  put(1, 4, -d2 * ca.transpose() * v.q3 * bl);
  put(1, 7, -d2 * ca.transpose() * v.q3 * abl);  // C X = I
  put(1, 8, -d2 * ca.transpose() * v.q3);
  put(2, 2, v.p1 + v.p2 - v.p3);
  put(2, 4, -v.p1 * bl + v.p3);
  put(2, 8, -v.p1);
  put(3, 3, -v.p1 - v.p3);
  put(3, 4, v.p3);
  put(4, 4, -(1.0 - varpi) * v.p3 + d2 * bl.transpose() * v.p4 * bl - 2.0 * v.p4 +
                d2 * bl.transpose() * v.q3 * bl);
  put(4, 5, 0.5 * dpi * (-bl));
  put(4, 7, d2 * (-bl).transpose() * v.q3 * abl);
  put(4, 8, d2 * bl.transpose() * v.p4 + d2 * bl.transpose() * v.q3);
  put(5, 5, v.q1 + v.q2 + d.l_max * inq - v.q3 + eps1 * npc * inq);
  put(5, 7, v.q3 + dpi * (-abl));
  put(5, 8, -dpi);
  put(6, 6, -v.q3 - v.q1);
  put(6, 7, v.q3);
  put(7, 7, -(1.0 - varpi) * v.q2 - 2.0 * v.q3 + d2 * abl.transpose() * v.q3 * abl);
  put(7, 8, 0.5 * d2 * abl.transpose() * v.q3);
  put(8, 8, -inq + d2 * v.p4 + d2 * v.q3);
  return sym(pi);
}

// Maps [xi; w; y; F] onto the eight-block state with every delayed copy
// equal to the current value.
Matrix delay_free_embedding(int n, int nq) {
  const auto off = block_offsets(n, nq);
  Matrix e = Matrix::Zero(off[kBlocks], n + 3 * nq);
  e.block(0, 0, n, n).setIdentity();
  for (int b : {2, 3, 4}) e.block(off[b - 1], n, nq, nq).setIdentity();
  for (int b : {5, 6, 7}) e.block(off[b - 1], n + nq, nq, nq).setIdentity();
  e.block(off[7], n + 2 * nq, nq, nq).setIdentity();
  return e;
}

int sym_dim(int k) { return k * (k + 1) / 2; }

// Symmetric basis: E_ii = e_i e_i^T, E_ij = e_i e_j^T + e_j e_i^T.
void unpack_symmetric(const Vector& x, int start, Matrix& m) {
  int k = start;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      m(i, j) = m(j, i) = x(k++);
    }
  }
}

void pack_symmetric(const Matrix& m, int start, Vector& x) {
  int k = start;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) x(k++) = i == j ? m(i, i) : 0.5 * (m(i, j) + m(j, i));
  }
}

struct Parametrization {
  std::vector<std::string> names;
  int nq = 0;
  int num_vars() const { return static_cast<int>(names.size()) * sym_dim(nq); }

  DecisionVars unpack(const Vector& x, const Matrix& pa, int n) const {
    DecisionVars v = zero_vars(n, nq);
    v.pa = pa;
    for (std::size_t k = 0; k < names.size(); ++k) {
      unpack_symmetric(x, static_cast<int>(k) * sym_dim(nq), *slot(v, names[k]));
    }
    return v;
  }

  Vector pack(const DecisionVars& v) const {
    Vector x = Vector::Zero(num_vars());
    for (std::size_t k = 0; k < names.size(); ++k) {
      pack_symmetric(slot(v, names[k]), static_cast<int>(k) * sym_dim(nq), x);
    }
    return x;
  }
};

sdp::Problem build_problem(const LmiData& data, LmiVariant variant, const Parametrization& par, const Matrix& pa,
                           double eps1, double bound) {
  sdp::Problem pr;
  pr.num_vars = par.num_vars();
  const int n = data.n();
  for (int p = 0; p < data.num_modes(); ++p) {
    pr.add_probed([&](const Vector& x) { return assemble_pi(data, par.unpack(x, pa, n), p, eps1, variant); });
  }
  const int nq = data.nq();
  for (std::size_t k = 0; k < par.names.size(); ++k) {
    const int start = static_cast<int>(k) * sym_dim(nq);
    auto mat = [&](const Vector& x) {
      Matrix m(nq, nq);
      unpack_symmetric(x, start, m);
      return m;
    };
    pr.add_probed([&](const Vector& x) { return Matrix(-mat(x)); });
    pr.add_probed([&](const Vector& x) { return Matrix(mat(x) - bound * Matrix::Identity(nq, nq)); });
  }
  return pr;
}

Status to_status(sdp::Status s) {
  switch (s) {
    case sdp::Status::kFeasible: return Status::kFeasible;
    case sdp::Status::kInfeasible: return Status::kInfeasible;
    case sdp::Status::kUndecided: break;
  }
  return Status::kUndecided;
}

}  // namespace

LmiVariant parse_variant(const std::string& name) {
  if (name == "theorem1") return LmiVariant::kTheorem1;
  if (name == "theorem2") return LmiVariant::kTheorem2;
  if (name == "delay-free" || name == "delay_free") return LmiVariant::kDelayFree;
  throw Error(ErrorCode::kInput, "unknown LMI variant '" + name + "' (expected theorem1|theorem2|delay-free)");
}

std::string to_string(LmiVariant v) {
  switch (v) {
    case LmiVariant::kTheorem1: return "theorem1";
    case LmiVariant::kTheorem2: return "theorem2";
    case LmiVariant::kDelayFree: return "delay-free";
  }
  return "?";
}

void LmiData::validate() const {
  if (a_tilde.rows() != a_tilde.cols()) throw Error(ErrorCode::kDimension, "lmi: A~ must be square");
  if (c.cols() != a_tilde.rows() || x.rows() != a_tilde.rows() || x.cols() != c.rows()) {
    throw Error(ErrorCode::kDimension, "lmi: C, X do not match A~");
  }
  if (pi.size() != static_cast<Eigen::Index>(laplacians.size()) || laplacians.empty()) {
    throw Error(ErrorCode::kDimension, "lmi: pi must have one entry per mode");
  }
  for (const auto& l : laplacians) {
    if (l.rows() != c.rows() || l.cols() != c.rows()) throw Error(ErrorCode::kDimension, "lmi: L~ must be Nq x Nq");
  }
  if (pi.size() * q != c.rows()) {
    // pi is indexed by mode but enters through diag(pi) (x) I_q on Nq blocks;
    // the two agree only when the mode count equals the agent count.
    throw Error(ErrorCode::kDimension, "lmi: diag(pi) (x) I_q needs as many modes as agents");
  }
  if (hurwitz_margin(a_tilde) >= 0.0) throw Error(ErrorCode::kNotHurwitz, "lmi: A~ is not Hurwitz");
  if (!(dbar >= 0.0)) throw Error(ErrorCode::kInput, "lmi: dbar must be >= 0");
  if (!(varpi >= 0.0 && varpi < 1.0)) throw Error(ErrorCode::kInput, "lmi: varpi must lie in [0, 1)");
  const double cx = (c * x - Matrix::Identity(c.rows(), c.rows())).cwiseAbs().maxCoeff();
  if (cx > 1e-8) throw Error(ErrorCode::kInput, "lmi: C X != I (residual " + std::to_string(cx) + ")");
}

LmiData make_lmi_data(const Scenario& sc, double dbar, double varpi) {
  const int n_agents = sc.num_agents();
  std::vector<Matrix> at, cs, xs;
  for (int i = 0; i < n_agents; ++i) {
    at.push_back(closed_loop(sc.agents[i], sc.gains[i].k));
    cs.push_back(sc.agents[i].c);
    xs.push_back(sc.gains[i].x);
  }
  LmiData d;
  d.a_tilde = block_diag(at);
  d.c = block_diag(cs);
  d.x = block_diag(xs);
  d.q = sc.output_dim();
  for (const auto& m : sc.topology.modes()) d.laplacians.push_back(kron(laplacian(m), Matrix::Identity(d.q, d.q)));
  d.alpha = sc.protocol.alpha;
  d.beta = sc.protocol.beta;
  d.dbar = dbar;
  d.varpi = varpi;
  d.l_max = lipschitz_max(sc.costs);
  d.pi = stationary_distribution(sc.generator);
  d.validate();
  return d;
}

PaChoice fix_pa(const Matrix& a_tilde, double kappa) {
  if (hurwitz_margin(a_tilde) >= 0.0) throw Error(ErrorCode::kNotHurwitz, "fix_Pa: A~ is not Hurwitz");
  if (!(kappa > 0.0)) throw Error(ErrorCode::kInput, "fix_Pa: kappa must be positive");
  const Eigen::Index n = a_tilde.rows();
  Matrix p0 = sym(solve_lyapunov(a_tilde, Matrix::Identity(n, n)));
  const double res = (p0 * a_tilde + a_tilde.transpose() * p0 + Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (res > 1e-9) throw Error(ErrorCode::kDivergence, "fix_Pa: Lyapunov residual " + std::to_string(res));
  return {kappa * p0, kappa};
}

std::vector<std::string> active_matrices(LmiVariant variant) {
  switch (variant) {
    case LmiVariant::kTheorem1: return {"P1", "P2", "P3", "P4", "Q1", "Q2", "Q3"};
    case LmiVariant::kTheorem2: return {"P1", "P2", "P4", "Q1", "Q3"};
    case LmiVariant::kDelayFree: return {"P1"};
  }
  return {};
}

Matrix assemble_pi(const LmiData& data, const DecisionVars& vars, int mode, double eps1, LmiVariant variant) {
  const int n = data.n();
  const int nq = data.nq();
  if (mode < 0 || mode >= data.num_modes()) throw Error(ErrorCode::kDimension, "assemble_pi: mode out of range");
  if (vars.pa.rows() != n || vars.pa.cols() != n) throw Error(ErrorCode::kDimension, "assemble_pi: P_a size");
  for (const char* name : {"P1", "P2", "P3", "P4", "Q1", "Q2", "Q3"}) {
    const Matrix& m = slot(vars, name);
    if (m.rows() != nq || m.cols() != nq) {
      throw Error(ErrorCode::kDimension, std::string("assemble_pi: ") + name + " must be Nq x Nq");
    }
  }
  switch (variant) {
    case LmiVariant::kTheorem1:
      return theorem1_pi(data, vars, mode, eps1, data.varpi);
    case LmiVariant::kTheorem2: {
      DecisionVars v = vars;
      v.p3.setZero();
      v.q2.setZero();
      return theorem1_pi(data, v, mode, eps1, 0.0);
    }
    case LmiVariant::kDelayFree: {
      DecisionVars v = zero_vars(n, nq);
      v.pa = vars.pa;
      v.p1 = vars.p1;
      LmiData d0 = data;
      d0.dbar = 0.0;
      const Matrix e = delay_free_embedding(n, nq);
      return sym(e.transpose() * theorem1_pi(d0, v, mode, eps1, 0.0) * e);
    }
  }
  return {};
}

std::optional<InfeasibilityWitness> find_structural_witness(const LmiData& data, LmiVariant variant, double eps1) {
  const int n = data.n();
  const int nq = data.nq();
  const int num_agents = nq / data.q;
  const auto names = active_matrices(variant);
  const auto off = block_offsets(n, nq);
  std::optional<InfeasibilityWitness> best;

  for (int k = 0; k < data.q; ++k) {
    Vector ones_v = Vector::Zero(nq);
    for (int i = 0; i < num_agents; ++i) ones_v(i * data.q + k) = 1.0;
    Vector phi;
    if (variant == LmiVariant::kDelayFree) {
      phi = Vector::Zero(n + 3 * nq);
      phi.segment(n + nq, nq) = ones_v;
    } else {
      phi = Vector::Zero(off[kBlocks]);
      for (int b : {5, 6, 7}) phi.segment(off[b - 1], nq) = ones_v;
    }
    phi.normalize();

    for (int p = 0; p < data.num_modes(); ++p) {
      DecisionVars v = zero_vars(n, nq);
      v.pa = fix_pa(data.a_tilde, eps1).pa;
      const Matrix base = assemble_pi(data, v, p, eps1, variant);
      const double c0 = phi.dot(base * phi);
      double min_sens = std::numeric_limits<double>::infinity();
      for (const auto& name : names) {
        Matrix s(nq, nq);
        for (int a = 0; a < nq; ++a) {
          for (int b = a; b < nq; ++b) {
            DecisionVars e = v;
            Matrix& m = *slot(e, name);
            m(a, b) = m(b, a) = 1.0;
            const double c = phi.dot(assemble_pi(data, e, p, eps1, variant) * phi) - c0;
            s(a, b) = s(b, a) = a == b ? c : 0.5 * c;
          }
        }
        min_sens = std::min(min_sens, min_sym_eig(s));
      }
      const double scale = 1e-12 * std::max(1.0, std::abs(c0));
      if (c0 > scale && min_sens >= -scale && (!best || c0 > best->form_value)) {
        best = InfeasibilityWitness{phi, p, c0, min_sens};
      }
    }
  }
  return best;
}

FeasibilityResult solve_feasibility(const LmiData& data, LmiVariant variant, const LmiOptions& options,
                                    const DecisionVars* warm_start) {
  data.validate();
  Parametrization par{active_matrices(variant), data.nq()};
  sdp::Options sopt = options.solver;
  sopt.mu = options.mu;

  struct Probe {
    sdp::Result res;
    double kappa;
    Matrix pa;
  };
  std::optional<Vector> warm;
  if (warm_start) warm = par.pack(*warm_start);

  auto run = [&](double kappa, bool to_optimum) {
    const PaChoice pc = fix_pa(data.a_tilde, kappa);
    const auto pr = build_problem(data, variant, par, pc.pa, pc.eps1, options.bound);
    sdp::Options o = sopt;
    if (to_optimum) o.stop_when_infeasible = false;
    Probe pb{sdp::minimize_max_eig(pr, o, warm ? &*warm : nullptr), kappa, pc.pa};
    return pb;
  };

  FeasibilityResult out;
  Probe best;
  int steps = 0;
  if (!options.search_kappa) {
    best = run(options.kappa, false);
    steps = best.res.newton_steps;
  } else {
    // max_p lambda_max(Pi_p) minimised over the decision matrices is convex in
    // kappa: kappa enters through -kappa I + (|A~|^2 / 4 kappa) I on the xi
    // block and kappa |diag(pi) C|^2 I on the output block.
    const double na = spectral_norm(data.a_tilde);
    double lo = 0.05 * std::max(na, 1e-3);
    double hi = 5.0 * std::max(na, 1e-3);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double k1 = hi - g * (hi - lo);
    double k2 = lo + g * (hi - lo);
    Probe p1 = run(k1, true);
    Probe p2 = run(k2, true);
    steps += p1.res.newton_steps + p2.res.newton_steps;
    best = p1.res.t <= p2.res.t ? p1 : p2;
    for (int it = 0; it < options.kappa_iterations && best.res.status != sdp::Status::kFeasible; ++it) {
      if (p1.res.t <= p2.res.t) {
        hi = k2;
        k2 = k1;
        p2 = std::move(p1);
        k1 = hi - g * (hi - lo);
        p1 = run(k1, true);
        steps += p1.res.newton_steps;
      } else {
        lo = k1;
        k1 = k2;
        p1 = std::move(p2);
        k2 = lo + g * (hi - lo);
        p2 = run(k2, true);
        steps += p2.res.newton_steps;
      }
      for (Probe* p : {&p1, &p2}) {
        if (p->res.t < best.res.t || p->res.status == sdp::Status::kFeasible) best = *p;
      }
    }
  }

  out.kappa = best.kappa;
  out.best_slack = best.res.t;
  out.lower_bound = best.res.lower_bound;
  out.newton_steps = steps;
  out.status = to_status(best.res.status);

  if (out.status == Status::kFeasible) {
    FeasibilityCertificate cert;
    cert.vars = par.unpack(best.res.x, best.pa, data.n());
    cert.mu = options.mu;
    cert.dbar = data.dbar;
    cert.varpi = data.varpi;
    cert.eps1 = best.kappa;
    cert.variant = variant;
    const auto report = check_certificate(data, cert);
    cert.lambda_max = report.lambda_max;
    // Every "feasible" answer must survive the independent check.
    if (report.pass) {
      out.certificate = std::move(cert);
    } else {
      out.status = Status::kUndecided;
    }
  } else {
    out.witness = find_structural_witness(data, variant, best.kappa);
    if (out.witness && out.status == Status::kUndecided) out.status = Status::kInfeasible;
  }
  return out;
}

CertificateReport check_certificate(const LmiData& data, const FeasibilityCertificate& cert) {
  CertificateReport rep;
  const double margin = 0.5 * cert.mu;
  LmiData d = data;
  d.dbar = cert.dbar;
  d.varpi = cert.varpi;
  bool ok = true;
  for (int p = 0; p < d.num_modes(); ++p) {
    const Matrix pi = assemble_pi(d, cert.vars, p, cert.eps1, cert.variant);
    Eigen::SelfAdjointEigenSolver<Matrix> es(pi);
    const double lmax = es.info() == Eigen::Success ? es.eigenvalues().maxCoeff()
                                                    : std::numeric_limits<double>::infinity();
    rep.lambda_max.push_back(lmax);
    if (!(lmax <= -margin)) {
      ok = false;
      rep.failing_modes.push_back(p);
    }
  }
  std::vector<std::string> names{"Pa"};
  for (const auto& s : active_matrices(cert.variant)) names.push_back(s);
  for (const auto& name : names) {
    const Matrix& m = slot(cert.vars, name);
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym(m));
    const double lmin = es.info() == Eigen::Success && m.size() > 0 ? es.eigenvalues().minCoeff()
                                                                     : -std::numeric_limits<double>::infinity();
    rep.lambda_min.emplace_back(name, lmin);
    if (!(lmin >= margin)) ok = false;
  }
  rep.pass = ok;
  return rep;
}

bool log_is_monotone(const std::vector<MarginProbe>& log) {
  double max_ok = -std::numeric_limits<double>::infinity();
  double min_bad = std::numeric_limits<double>::infinity();
  for (const auto& p : log) {
    if (p.status == Status::kFeasible) {
      max_ok = std::max(max_ok, p.dbar);
    } else {
      min_bad = std::min(min_bad, p.dbar);
    }
  }
  return max_ok < min_bad;
}

MarginResult bisect_margin(const MarginOracle& oracle, double d_max, double tol) {
  if (!(d_max >= 0.0)) throw Error(ErrorCode::kInput, "margin: d_max must be >= 0");
  if (!(tol > 0.0)) throw Error(ErrorCode::kInput, "margin: tol must be positive");
  MarginResult out;
  auto probe = [&](double d) {
    out.log.push_back(oracle(d));
    out.log.back().dbar = d;
    return out.log.back().status == Status::kFeasible;
  };
  if (!probe(0.0)) {
    throw Error(ErrorCode::kInfeasible,
                "margin: not certified at dbar = 0 (best slack " + std::to_string(out.log.back().slack) + ")");
  }
  if (d_max == 0.0) return out;
  if (probe(d_max)) {
    out.d_star = d_max;
    return out;
  }
  double lo = 0.0;
  double hi = d_max;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (probe(mid) ? lo : hi) = mid;
  }
  out.d_star = lo;
  out.d_fail = hi;
  return out;
}

MarginResult delay_margin(const LmiData& data, LmiVariant variant, double d_max, double tol,
                          const LmiOptions& options) {
  return bisect_margin(
      [&](double d) {
        LmiData dd = data;
        dd.dbar = d;
        const auto r = solve_feasibility(dd, variant, options);
        return MarginProbe{d, r.status, r.best_slack};
      },
      d_max, tol);
}

Lemma2Result lemma2_numeric_check(const Matrix& r1, const std::function<Vector(double)>& z,
                                  const std::function<Vector(double)>& zdot, double t, double d_m, double d_of_t,
                                  int samples) {
  if (!(d_m >= 0.0) || !(d_of_t >= 0.0) || d_of_t > d_m) {
    throw Error(ErrorCode::kInput, "lemma2: need 0 <= d(t) <= d_m");
  }
  if (samples < 2) throw Error(ErrorCode::kInput, "lemma2: need at least two samples");
  if (r1.rows() != r1.cols() || min_sym_eig(r1) <= 0.0) throw Error(ErrorCode::kInput, "lemma2: R1 must be PD");

  Lemma2Result out;
  if (d_m > 0.0) {
    const double h = d_m / (samples - 1);
    double integral = 0.0;
    for (int k = 0; k < samples; ++k) {
      const Vector zd = zdot(t - d_m + k * h);
      const double w = (k == 0 || k == samples - 1) ? 0.5 : 1.0;
      integral += w * zd.dot(r1 * zd);
    }
    out.lhs = d_m * integral * h;
  }
  const Vector a = z(t);
  const Vector b = z(t - d_m);
  const Vector c = z(t - d_of_t);
  out.rhs = -a.dot(r1 * a) - b.dot(r1 * b) - 2.0 * c.dot(r1 * c) + 2.0 * a.dot(r1 * c) + 2.0 * b.dot(r1 * c);
  out.holds = -out.lhs <= out.rhs + 1e-8 * std::max(1.0, std::abs(out.lhs));
  return out;
}

void write_certificate(std::ostream& os, const FeasibilityCertificate& cert) {
  os << std::setprecision(17);
  os << "# LMI feasibility certificate\n";
  os << "variant " << to_string(cert.variant) << "\n";
  os << "dbar " << cert.dbar << "\n";
  os << "varpi " << cert.varpi << "\n";
  os << "eps1 " << cert.eps1 << "\n";
  os << "mu " << cert.mu << "\n";
  std::vector<std::string> names{"Pa"};
  for (const auto& s : active_matrices(cert.variant)) names.push_back(s);
  for (const auto& name : names) {
    const Matrix& m = slot(cert.vars, name);
    os << "matrix " << name << " " << m.rows() << " " << m.cols() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
      os << "\n";
    }
  }
  os << "lambda_max " << cert.lambda_max.size() << "\n";
  for (std::size_t p = 0; p < cert.lambda_max.size(); ++p) os << "mode " << p + 1 << " " << cert.lambda_max[p] << "\n";
}

}  // namespace dopt
