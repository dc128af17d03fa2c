#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tgplan/geometry.hpp"
#include "tgplan/path.hpp"
#include "tgplan/vec2.hpp"
#include "tgplan/velocity.hpp"

namespace tgplan {

struct SimState {
  double t = 0.0;
  Vec2 r;
  Vec2 v;
};

using ControlLaw = std::function<Vec2(double t, const SimState& state)>;

/// Classical RK4 on r' = v, v' = u - c |v| v from `initial` to t_end.
/// Every control evaluation is checked against u_max (1 + 1e-9); a violation
/// throws ControlBoundViolation.
std::vector<SimState> integrate2d(const ControlLaw& control, const SimState& initial, double dt, double t_end,
                                  const DynParams& params);

/// Extreme tangential acceleration laws along a path segment.
enum class AccelLaw {
  StraightAccel,  // u - c v^2
  StraightDecel,  // -u - c v^2
  ArcApproxAccel, // linearized arc bounds
  ArcApproxDecel,
  ArcExactAccel,  // -c v^2 +- sqrt(u^2 - v^4 / rho^2)
  ArcExactDecel,
};

/// Tangential acceleration of `law` at speed v (rho ignored on straights).
double lawAccel(AccelLaw law, double v, double rho, const DynParams& params);

/// Speed above which `law` is undefined or cannot hold the speed.
double lawSpeedBand(AccelLaw law, double rho, const DynParams& params);

struct PathSample {
  double t = 0.0;
  double gamma = 0.0;
  double v = 0.0;
};

struct PathIntegration {
  double time = 0.0;         // time at which the run ended
  double distance = 0.0;     // distance covered
  bool completed = false;    // reached `length`
  bool stopped = false;      // speed reached zero first
  bool reached_speed = false; // speed reached v_stop first
  std::vector<PathSample> table;
};

/// RK4 on gamma' = v, v' = a(v) from (0, v0) until gamma = length, the speed
/// reaches zero, the speed reaches v_stop, or t_max. With `reverse`, integrates backward in time, so
/// gamma measures distance back from the segment end and v' = -a(v).
/// The final step is shortened to land exactly on the stopping event.
/// Throws CapExceeded if v leaves [0, band].
PathIntegration integratePath(double length, double rho, AccelLaw law, double v0, double dt,
                              const DynParams& params, bool reverse = false,
                              std::optional<double> v_stop = std::nullopt, double t_max = 1e6);

/// One row of a trajectory file.
struct TrajectoryRow {
  double t = 0.0;
  Vec2 r;
  Vec2 v;
  Vec2 u;
  double gamma = 0.0;
};

struct AuditTolerances {
  double control_rel = 1e-6;      // |u| <= u_max (1 + control_rel)
  double clearance = -1e-9;       // min signed distance allowed
  double path_deviation = 1e-6;   // m
  double terminal = 1e-6;         // start/goal position and speed
  double arc_speed = 1e-9;        // speed above the arc cap
  // Per interval, |dr - (v0 + v1) h / 2| <= kinematic + kinematic_scale * u_max * h^2.
  // The scaled term bounds the trapezoid error when the control jumps inside the interval.
  double kinematic = 1e-9;
  double kinematic_scale = 0.5;
};

struct AuditFailure {
  std::string check;
  std::size_t row = 0;
  std::string detail;
};

struct AuditReport {
  double max_control = 0.0;
  std::size_t max_control_row = 0;
  double max_speed = 0.0;
  std::vector<double> clearance;  // per obstacle, +inf when never approached
  double min_clearance = 0.0;
  double max_path_deviation = 0.0;
  double max_arc_speed_excess = 0.0;  // max(speed - cap) on arcs, negative when under
  double max_kinematic_residual = 0.0;
  double start_error = 0.0;
  double final_error = 0.0;
  std::vector<AuditFailure> failures;

  bool passed() const { return failures.empty(); }
  std::string summary() const;
};

/// What the trajectory is expected to do.
struct AuditTarget {
  Vec2 start;
  Vec2 goal;
  double v_start = 0.0;
  double v_end = 0.0;
  std::optional<PlannedPath> path;  // enables deviation and arc-cap checks
};

AuditReport auditTrajectory(std::span<const TrajectoryRow> rows, std::span<const InflatedObstacle> obstacles,
                            const DynParams& params, const AuditTarget& target,
                            const AuditTolerances& tol = AuditTolerances{});

/// Converts sampled planner output to trajectory rows.
std::vector<TrajectoryRow> toRows(std::span<const TrajectorySample> samples);

}  // namespace tgplan
