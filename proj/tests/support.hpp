#pragma once

#include <random>

#include "dopt/scenario.hpp"

namespace dopt::testing {

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline Matrix random_matrix(std::mt19937_64& rng, int r, int c, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = n(rng);
  return m;
}

inline Matrix random_spd(std::mt19937_64& rng, int n, double floor = 0.1) {
  Matrix m = random_matrix(rng, n, n);
  return m * m.transpose() + floor * Matrix::Identity(n, n);
}

/// Demo agents and costs with every topology mode replaced by the complete
/// graph: switching becomes invisible and the vector field is smooth.
inline Scenario smooth_demo(double delay) {
  Scenario sc = demo_scenario(delay);
  std::vector<ModeDigraph> modes(3, ModeDigraph(demo_mode_adjacency(2)));
  sc.topology = SwitchingTopology(std::move(modes));
  return sc;
}

/// One demo agent (agent 1 data) on an empty graph with f = 1/2 (theta - target)^2.
inline Scenario single_agent(double target, double delay = 0.0) {
  Scenario demo = demo_scenario(0.1);
  Scenario sc{{demo.agents[0]},
              {demo.gains[0]},
              {QuadraticCost(mat({{1.0}}), vec({-target}), 0.5 * target * target)},
              SwitchingTopology({ModeDigraph(Matrix::Zero(1, 1))}),
              validate_generator(Matrix::Zero(1, 1)),
              vec({1.0}),
              ProtocolParams{1.0, 0.75},
              DelaySpec::constant(1, delay),
              {demo.x0[0]},
              demo.sim,
              AnalysisSettings{}};
  sc.validate();
  return sc;
}

}  // namespace dopt::testing
