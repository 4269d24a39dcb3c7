#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dopt/sim.hpp"

namespace dopt {

/// Scenario from a JSON document. Matrices are row-major nested arrays.
/// Missing U/W/X are solved from the regulator equations. Throws Error with
/// a message naming the offending field and agent.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& json_text);

/// JSON text that parse_scenario_text maps back to an equal scenario.
std::string scenario_to_json(const Scenario& sc);

/// Adjacency of topology mode `mode` (0, 1, 2) of the bundled example.
Matrix demo_mode_adjacency(int mode);

/// The three-agent heterogeneous example with the bundled cycle topology,
/// alpha = 1, beta = 0.75 and a constant delay `delay` for every agent.
Scenario demo_scenario(double delay);

/// Header `t,mode,y_1..y_N,err_1..err_N,xi_norm`, LF endings, 12 significant
/// digits, modes one-based. For q > 1 the per-agent columns become
/// y_<i>_<k>; err_<i> stays the Euclidean error norm.
void write_trajectory_csv(const Trajectory& tr, const Vector& theta_star, std::ostream& out);
void emit_trajectory_csv(const Trajectory& tr, const Vector& theta_star, const std::filesystem::path& path);

}  // namespace dopt
