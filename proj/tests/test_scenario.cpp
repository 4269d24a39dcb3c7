#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace dopt;
using namespace dopt::testing;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const std::filesystem::path kDemo = std::filesystem::path(DOPT_DATA_DIR) / "demo.json";

double max_diff(const Scenario& a, const Scenario& b) {
  double d = 0.0;
  auto upd = [&](const Matrix& x, const Matrix& y) {
    REQUIRE(x.rows() == y.rows());
    REQUIRE(x.cols() == y.cols());
    if (x.size()) d = std::max(d, (x - y).cwiseAbs().maxCoeff());
  };
  for (int i = 0; i < a.num_agents(); ++i) {
    upd(a.agents[i].a, b.agents[i].a);
    upd(a.agents[i].b, b.agents[i].b);
    upd(a.agents[i].c, b.agents[i].c);
    upd(a.gains[i].k, b.gains[i].k);
    upd(a.gains[i].u, b.gains[i].u);
    upd(a.gains[i].w, b.gains[i].w);
    upd(a.gains[i].x, b.gains[i].x);
    upd(a.costs[i].hessian(), b.costs[i].hessian());
    upd(a.costs[i].linear(), b.costs[i].linear());
    upd(a.x0[i], b.x0[i]);
  }
  for (int p = 0; p < a.topology.num_modes(); ++p) {
    upd(a.topology.modes()[p].adjacency(), b.topology.modes()[p].adjacency());
  }
  upd(a.generator.rates(), b.generator.rates());
  upd(a.initial_distribution, b.initial_distribution);
  d = std::max({d, std::abs(a.protocol.alpha - b.protocol.alpha), std::abs(a.protocol.beta - b.protocol.beta),
                std::abs(a.sim.dt - b.sim.dt), std::abs(a.sim.horizon - b.sim.horizon)});
  return d;
}

}  // namespace

TEST_CASE("bundled scenario parses and round-trips") {
  const Scenario sc = parse_scenario(kDemo);
  CHECK(sc.num_agents() == 3);
  CHECK(sc.output_dim() == 1);
  CHECK(sc.topology.num_modes() == 3);
  CHECK(max_diff(sc, demo_scenario(0.1)) <= 1e-12);
  CHECK(sc.sim.seed == 2);

  const std::string text = scenario_to_json(sc);
  const Scenario back = parse_scenario_text(text);
  CHECK(max_diff(sc, back) <= 1e-12);
  CHECK(scenario_to_json(back) == text);
}

TEST_CASE("missing feedforward gains are solved on load") {
  json doc = json::parse(slurp(kDemo));
  for (auto& g : doc["gains"]) {
    g.erase("U");
    g.erase("W");
    g.erase("X");
  }
  const Scenario sc = parse_scenario_text(doc.dump());
  for (int i = 0; i < 3; ++i) {
    const auto r = regulator_residuals(sc.agents[i], sc.gains[i].u, sc.gains[i].w, sc.gains[i].x);
    CHECK(r.max() <= 1e-10);
  }
}

TEST_CASE("diagnostics name the offending agent or row") {
  json doc = json::parse(slurp(kDemo));
  SUBCASE("output matrix of the wrong width") {
    doc["agents"][1]["C"] = json::array({json::array({1.0, 1.0, 1.0})});
    try {
      parse_scenario_text(doc.dump());
      FAIL("expected a dimension error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDimension);
      CHECK(std::string(e.what()).find("agent 2") != std::string::npos);
    }
  }
  SUBCASE("generator row not summing to zero") {
    doc["generator"][1] = json::array({0.2, -0.6, 0.5});
    try {
      parse_scenario_text(doc.dump());
      FAIL("expected a generator error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kGenerator);
      CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
  }
  SUBCASE("malformed JSON") {
    try {
      parse_scenario_text("{\"agents\": [");
      FAIL("expected an input error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInput);
    }
  }
  SUBCASE("missing file") {
    try {
      parse_scenario("/nonexistent/scenario.json");
      FAIL("expected an io error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kIo);
    }
  }
}

TEST_CASE("trajectory CSV: header, line endings, precision and determinism") {
  Scenario sc = demo_scenario(0.1);
  sc.sim.horizon = 0.5;
  const auto tr = integrate(sc);
  const Vector star = vec({2.8});
  std::ostringstream a;
  write_trajectory_csv(tr, star, a);
  const std::string text = a.str();

  CHECK(text.rfind("t,mode,y_1,y_2,y_3,err_1,err_2,err_3,xi_norm\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(tr.size() + 1));

  // Second data line: t = 0.001, then fields with at most 12 significant digits.
  std::istringstream lines(text);
  std::string header, row0, row1;
  std::getline(lines, header);
  std::getline(lines, row0);
  std::getline(lines, row1);
  CHECK(row1.rfind("0.001,", 0) == 0);
  std::istringstream fields(row1);
  std::string f;
  int count = 0;
  while (std::getline(fields, f, ',')) {
    ++count;
    std::string digits;
    const auto e = f.find_first_of("eE");
    for (char c : f.substr(0, e)) {
      if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
    }
    digits.erase(0, digits.find_first_not_of('0'));
    CHECK(digits.size() <= 12);
  }
  CHECK(count == 9);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", tr.y(1, 0));
  CHECK(row1.find(buf) != std::string::npos);

  // Re-emission is byte identical, also through the file writer.
  std::ostringstream b;
  write_trajectory_csv(integrate(sc), star, b);
  CHECK(b.str() == text);
  const auto path = std::filesystem::temp_directory_path() / "dopt_test_traj.csv";
  emit_trajectory_csv(tr, star, path);
  CHECK(slurp(path) == text);
  std::filesystem::remove(path);

  std::ostringstream sink;
  CHECK_THROWS_AS(write_trajectory_csv(Trajectory{}, star, sink), Error);
}

TEST_CASE("vector outputs get per-component columns") {
  Trajectory tr;
  tr.num_agents = 2;
  tr.q = 2;
  tr.time = {0.0};
  tr.mode = {1};
  tr.y = mat({{1.0, 2.0, 3.0, 4.0}});
  tr.xi = mat({{3.0, 4.0}});
  std::ostringstream os;
  write_trajectory_csv(tr, vec({1.0, 2.0}), os);
  CHECK(os.str() == "t,mode,y_1_1,y_1_2,y_2_1,y_2_2,err_1,err_2,xi_norm\n0,2,1,2,3,4,0,2.82842712475,5\n");
}
