#include "dopt/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"

namespace dopt {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::kInput, field + ": " + msg);
}

const json& need(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where.empty() ? key : where + "." + key, "missing field");
  return j.at(key);
}

double to_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

Matrix to_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a nonempty array of rows");
  // A flat array is read as a column vector.
  if (!j.front().is_array()) {
    Matrix m(static_cast<Eigen::Index>(j.size()), 1);
    for (std::size_t r = 0; r < j.size(); ++r) m(static_cast<Eigen::Index>(r), 0) = to_number(j[r], field);
    return m;
  }
  const std::size_t cols = j.front().size();
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail(field, "rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = to_number(j[r][c], field);
    }
  }
  return m;
}

Vector to_vector(const json& j, const std::string& field) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  if (!j.is_array() || j.empty()) fail(field, "expected a nonempty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = to_number(j[k], field);
  return v;
}

json from_matrix(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json from_vector(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(v(k));
  return arr;
}

std::string idx(const std::string& name, std::size_t i) { return name + "[" + std::to_string(i) + "]"; }

Scenario from_json(const json& doc) {
  const json& agents_j = need(doc, "agents", "");
  if (!agents_j.is_array() || agents_j.empty()) fail("agents", "expected a nonempty array");
  const std::size_t n_agents = agents_j.size();

  std::vector<AgentModel> agents;
  for (std::size_t i = 0; i < n_agents; ++i) {
    const std::string where = idx("agents", i);
    const json& a = agents_j[i];
    AgentModel m{to_matrix(need(a, "A", where), where + ".A"), to_matrix(need(a, "B", where), where + ".B"),
                 to_matrix(need(a, "C", where), where + ".C")};
    // C given as a flat array is a single output row.
    if (a.at("C").is_array() && !a.at("C").empty() && !a.at("C").front().is_array()) m.c.transposeInPlace();
    m.validate(static_cast<int>(i));
    agents.push_back(std::move(m));
  }
  const int q = agents.front().q();
  for (std::size_t i = 0; i < n_agents; ++i) {
    if (agents[i].q() != q) {
      throw Error(ErrorCode::kDimension,
                  "agent " + std::to_string(i + 1) + ": output dimension differs from agent 1");
    }
  }

  const json& gains_j = need(doc, "gains", "");
  if (!gains_j.is_array() || gains_j.size() != n_agents) fail("gains", "expected one entry per agent");
  std::vector<GainSet> gains;
  for (std::size_t i = 0; i < n_agents; ++i) {
    const std::string where = idx("gains", i);
    const json& g = gains_j[i];
    GainSet gs;
    gs.k = to_matrix(need(g, "K", where), where + ".K");
    const bool has_u = g.contains("U"), has_w = g.contains("W"), has_x = g.contains("X");
    if (has_u && has_w && has_x) {
      gs.u = to_matrix(g.at("U"), where + ".U");
      gs.w = to_matrix(g.at("W"), where + ".W");
      gs.x = to_matrix(g.at("X"), where + ".X");
    } else if (!has_u && !has_w && !has_x) {
      auto sol = solve_regulator(agents[i]);
      gs.u = sol.u;
      gs.w = sol.w;
      gs.x = sol.x;
    } else {
      fail(where, "give all of U, W, X or none of them");
    }
    gains.push_back(std::move(gs));
  }

  const json& costs_j = need(doc, "costs", "");
  if (!costs_j.is_array() || costs_j.size() != n_agents) fail("costs", "expected one entry per agent");
  CostSet costs;
  for (std::size_t i = 0; i < n_agents; ++i) {
    const std::string where = idx("costs", i);
    const json& c = costs_j[i];
    costs.emplace_back(to_matrix(need(c, "H", where), where + ".H"), to_vector(need(c, "g", where), where + ".g"),
                       c.contains("c") ? to_number(c.at("c"), where + ".c") : 0.0);
  }

  const json& topo_j = need(doc, "topology", "");
  if (!topo_j.is_array() || topo_j.empty()) fail("topology", "expected a nonempty array of adjacency matrices");
  std::vector<ModeDigraph> modes;
  for (std::size_t p = 0; p < topo_j.size(); ++p) {
    Matrix adj = to_matrix(topo_j[p], idx("topology", p));
    if (adj.rows() != static_cast<Eigen::Index>(n_agents) || adj.cols() != static_cast<Eigen::Index>(n_agents)) {
      throw Error(ErrorCode::kDimension, idx("topology", p) + ": adjacency must be N x N");
    }
    modes.emplace_back(std::move(adj));
  }

  GeneratorMatrix gen = validate_generator(to_matrix(need(doc, "generator", ""), "generator"));
  Vector init = to_vector(need(doc, "initial_distribution", ""), "initial_distribution");

  ProtocolParams proto;
  const json& pj = need(doc, "protocol", "");
  proto.alpha = to_number(need(pj, "alpha", "protocol"), "protocol.alpha");
  proto.beta = to_number(need(pj, "beta", "protocol"), "protocol.beta");

  DelaySpec delay;
  const json& dj = need(doc, "delay", "");
  const std::string kind = dj.value("kind", std::string("constant"));
  if (kind == "constant") {
    delay.kind = DelaySpec::Kind::kConstant;
  } else if (kind == "sinusoidal") {
    delay.kind = DelaySpec::Kind::kSinusoidal;
    delay.omega = to_number(need(dj, "omega", "delay"), "delay.omega");
  } else {
    fail("delay.kind", "expected \"constant\" or \"sinusoidal\"");
  }
  const json& bj = need(dj, "bound", "delay");
  if (bj.is_number()) {
    delay.bound.assign(n_agents, bj.get<double>());
  } else {
    const Vector b = to_vector(bj, "delay.bound");
    delay.bound.assign(b.data(), b.data() + b.size());
  }

  SimSettings sim;
  std::vector<Vector> x0;
  const json& sj = need(doc, "sim", "");
  sim.dt = to_number(need(sj, "dt", "sim"), "sim.dt");
  sim.horizon = to_number(need(sj, "horizon", "sim"), "sim.horizon");
  if (sj.contains("seed")) {
    if (!sj.at("seed").is_number_unsigned()) fail("sim.seed", "expected a nonnegative integer");
    sim.seed = sj.at("seed").get<std::uint64_t>();
  }
  if (sj.contains("x0")) {
    const json& xj = sj.at("x0");
    if (!xj.is_array() || xj.size() != n_agents) fail("sim.x0", "expected one initial state per agent");
    for (std::size_t i = 0; i < n_agents; ++i) x0.push_back(to_vector(xj[i], idx("sim.x0", i)));
  } else {
    for (const auto& a : agents) x0.push_back(Vector::Zero(a.n()));
  }

  AnalysisSettings analysis;
  if (doc.contains("analysis")) {
    const json& aj = doc.at("analysis");
    if (aj.contains("varpi")) analysis.varpi = to_number(aj.at("varpi"), "analysis.varpi");
    if (aj.contains("variant")) analysis.variant = aj.at("variant").get<std::string>();
    if (aj.contains("d_max")) analysis.d_max = to_number(aj.at("d_max"), "analysis.d_max");
    if (aj.contains("tol")) analysis.tol = to_number(aj.at("tol"), "analysis.tol");
  }

  Scenario sc{std::move(agents),
              std::move(gains),
              std::move(costs),
              SwitchingTopology(std::move(modes)),
              std::move(gen),
              std::move(init),
              proto,
              std::move(delay),
              std::move(x0),
              sim,
              analysis};
  sc.validate();
  return sc;
}

}  // namespace

Scenario parse_scenario_text(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInput, std::string("scenario: invalid JSON: ") + e.what());
  }
  try {
    return from_json(doc);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInput, std::string("scenario: ") + e.what());
  }
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string scenario_to_json(const Scenario& sc) {
  json doc;
  for (const auto& a : sc.agents) doc["agents"].push_back({{"A", from_matrix(a.a)}, {"B", from_matrix(a.b)}, {"C", from_matrix(a.c)}});
  for (const auto& g : sc.gains) {
    doc["gains"].push_back({{"K", from_matrix(g.k)}, {"U", from_matrix(g.u)}, {"W", from_matrix(g.w)}, {"X", from_matrix(g.x)}});
  }
  for (const auto& c : sc.costs) {
    doc["costs"].push_back({{"H", from_matrix(c.hessian())}, {"g", from_vector(c.linear())}, {"c", c.offset()}});
  }
  for (const auto& m : sc.topology.modes()) doc["topology"].push_back(from_matrix(m.adjacency()));
  doc["generator"] = from_matrix(sc.generator.rates());
  doc["initial_distribution"] = from_vector(sc.initial_distribution);
  doc["protocol"] = {{"alpha", sc.protocol.alpha}, {"beta", sc.protocol.beta}};
  json delay = {{"kind", sc.delay.kind == DelaySpec::Kind::kConstant ? "constant" : "sinusoidal"},
                {"bound", sc.delay.bound}};
  if (sc.delay.kind == DelaySpec::Kind::kSinusoidal) delay["omega"] = sc.delay.omega;
  doc["delay"] = delay;
  json x0 = json::array();
  for (const auto& x : sc.x0) x0.push_back(from_vector(x));
  doc["sim"] = {{"dt", sc.sim.dt}, {"horizon", sc.sim.horizon}, {"seed", sc.sim.seed}, {"x0", x0}};
  doc["analysis"] = {{"varpi", sc.analysis.varpi},
                     {"variant", sc.analysis.variant},
                     {"d_max", sc.analysis.d_max},
                     {"tol", sc.analysis.tol}};
  // Keep each numeric row on one line so matrices stay readable.
  const std::string text = doc.dump(2);
  static const std::regex row(R"(\[\s*(-?[0-9][0-9.eE+-]*(?:\s*,\s*-?[0-9][0-9.eE+-]*)*)\s*\])");
  static const std::regex gap(R"(\s*,\s*)");
  std::string out;
  auto it = std::sregex_iterator(text.begin(), text.end(), row);
  std::size_t last = 0;
  for (; it != std::sregex_iterator(); ++it) {
    out.append(text, last, static_cast<std::size_t>(it->position()) - last);
    out += "[" + std::regex_replace((*it)[1].str(), gap, ", ") + "]";
    last = static_cast<std::size_t>(it->position() + it->length());
  }
  out.append(text, last, std::string::npos);
  return out + "\n";
}

// Each mode is strongly connected and weight-balanced, so the centralized optimum is an
// equilibrium in every mode: 0 = cycle 1->2->3->1, 1 = the reversed cycle, 2 = complete
// graph. All weights 1.
Matrix demo_mode_adjacency(int mode) {
  Matrix a = Matrix::Zero(3, 3);
  if (mode == 2) {
    a.setOnes();
    a.diagonal().setZero();
    return a;
  }
  a(1, 0) = a(2, 1) = a(0, 2) = 1.0;
  if (mode == 1) a.transposeInPlace();
  return a;
}

Scenario demo_scenario(double delay) {
  auto mat = [](std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
      Eigen::Index c = 0;
      for (double v : row) m(r, c++) = v;
      ++r;
    }
    return m;
  };
  auto col = [](std::initializer_list<double> v) {
    Matrix m(static_cast<Eigen::Index>(v.size()), 1);
    Eigen::Index r = 0;
    for (double x : v) m(r++, 0) = x;
    return m;
  };

  std::vector<AgentModel> agents{
      {mat({{0, 1}, {0, 0}}), mat({{0, 1}, {1, -2}}), mat({{1, 1}})},
      {mat({{0, -1}, {1, -2}}), mat({{1, 0}, {3, -1}}), mat({{-1, 1}})},
      {mat({{0, 1, 0}, {0, 0, 1}, {0.5, 1, -2}}), mat({{1, 0}, {0, 1}, {1, 0}}), mat({{1, -1, 1}})},
  };
  std::vector<GainSet> gains{
      {mat({{8, 7}, {4, 1}}), col({1, 0.5}), col({1.5, 0.5}), col({0.5, 0.5})},
      {mat({{3, -1}, {8, -5}}), col({-0.5, 0}), col({-0.5, -2}), col({-0.5, 0.5})},
      {mat({{6.3333, 1, -1.3333}, {0, 2, 1}}), col({-1, 0}), col({0, -1}), col({0, -1, 0})},
  };
  // f1 = theta^2 / 2 - 1, f2 = (theta - 4)^2, f3 = (theta - 3)^2
  CostSet costs{
      QuadraticCost(mat({{1}}), Vector::Constant(1, 0.0), -1.0),
      QuadraticCost(mat({{2}}), Vector::Constant(1, -8.0), 16.0),
      QuadraticCost(mat({{2}}), Vector::Constant(1, -6.0), 9.0),
  };
  std::vector<ModeDigraph> modes{ModeDigraph(demo_mode_adjacency(0)), ModeDigraph(demo_mode_adjacency(1)),
                                 ModeDigraph(demo_mode_adjacency(2))};
  GeneratorMatrix gen = validate_generator(mat({{-0.2, 0.1, 0.1}, {0.2, -0.6, 0.4}, {0.02, 0.08, -0.1}}));
  Vector init(3);
  init << 0.4772, 0.2612, 0.3235;

  std::vector<Vector> x0(3);
  x0[0] = Vector::Zero(2);
  x0[0] << 1.0, 0.0;
  x0[1] = Vector::Zero(2);
  x0[1] << 0.0, -1.0;
  x0[2] = Vector::Zero(3);
  x0[2] << 1.0, 0.0, 0.5;

  SimSettings sim;
  sim.dt = 1e-3;
  sim.horizon = 10.0;
  sim.seed = 2;

  Scenario sc{std::move(agents),
              std::move(gains),
              std::move(costs),
              SwitchingTopology(std::move(modes)),
              std::move(gen),
              normalize_distribution(init),
              ProtocolParams{1.0, 0.75},
              DelaySpec::constant(3, delay),
              std::move(x0),
              sim,
              AnalysisSettings{}};
  sc.validate();
  return sc;
}

void write_trajectory_csv(const Trajectory& tr, const Vector& theta_star, std::ostream& out) {
  if (tr.size() == 0) throw Error(ErrorCode::kInput, "cannot emit an empty trajectory");
  const int n = tr.num_agents, q = tr.q;
  std::string line = "t,mode";
  for (int i = 1; i <= n; ++i) {
    if (q == 1) {
      line += ",y_" + std::to_string(i);
    } else {
      for (int k = 1; k <= q; ++k) line += ",y_" + std::to_string(i) + "_" + std::to_string(k);
    }
  }
  for (int i = 1; i <= n; ++i) line += ",err_" + std::to_string(i);
  line += ",xi_norm\n";
  out << line;
  char buf[64];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.12g", v);
    out << buf;
  };
  for (std::size_t k = 0; k < tr.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.12g,%d", tr.time[k], tr.mode[k] + 1);
    out << buf;
    const auto row = static_cast<Eigen::Index>(k);
    for (Eigen::Index c = 0; c < tr.y.cols(); ++c) put(tr.y(row, c));
    for (int i = 0; i < n; ++i) put((tr.y_of(k, i) - theta_star).norm());
    put(tr.xi.row(row).norm());
    out << '\n';
  }
}

void emit_trajectory_csv(const Trajectory& tr, const Vector& theta_star, const std::filesystem::path& path) {
  if (tr.size() == 0) throw Error(ErrorCode::kInput, "cannot emit an empty trajectory");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  write_trajectory_csv(tr, theta_star, out);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace dopt
