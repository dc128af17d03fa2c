#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tgplan/geometry.hpp"
#include "tgplan/sim_oracle.hpp"
#include "tgplan/velocity.hpp"

namespace tgplan {

/// Planning problem as read from a scenario file.
///
/// File format, one record per line, '#' starts a comment:
///   inflation <rho>
///   start <x> <y>
///   goal <x> <y>
///   u_max <value>
///   c_d <value>
///   v_start <value>        (optional, default 0)
///   v_end <value>          (optional, default 0)
///   obstacle <x1> <y1> <x2> <y2> <x3> <y3> ...
struct Scenario {
  std::vector<Polygon> obstacles;
  double inflation = 0.0;
  Vec2 start;
  Vec2 goal;
  DynParams params;
  double v_start = 0.0;
  double v_end = 0.0;

  std::vector<InflatedObstacle> inflated() const;
};

/// Throws InvalidScenario with "line N: ..." diagnostics.
Scenario parseScenario(std::istream& in);
Scenario loadScenario(const std::string& path);

/// Canonical text form (17 significant digits); parseScenario round-trips it.
std::string serializeScenario(const Scenario& s);

/// FNV-1a 64 of the canonical text form, as 16 hex digits.
std::string scenarioHash(const Scenario& s);

/// Trajectory file: metadata header plus rows t x y vx vy ux uy gamma.
struct TrajectoryFile {
  std::string scenario_hash;
  DynParams params;
  double inflation = 0.0;
  double v_start = 0.0;
  double v_end = 0.0;
  double total_time = 0.0;
  double path_length = 0.0;
  double dt = 0.0;
  bool filtered = true;
  std::vector<TrajectoryRow> rows;
};

void writeTrajectory(std::ostream& out, const TrajectoryFile& traj);
/// Throws InvalidScenario on malformed input.
TrajectoryFile readTrajectory(std::istream& in);

/// Formats with 17 significant digits ("%.17g").
std::string formatDouble(double v);

}  // namespace tgplan
