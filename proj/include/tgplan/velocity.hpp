#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tgplan/path.hpp"
#include "tgplan/vec2.hpp"

namespace tgplan {

/// Damped double integrator: r'' = u - c_d |v| v with |u| <= u_max.
struct DynParams {
  double u_max = 1.0;  // m/s^2
  double c_d = 0.1;    // 1/m

  /// Terminal speed sqrt(u_max / c_d).
  double vbar() const;
  /// Throws InvalidScenario unless both parameters are finite and positive.
  void validate() const;
};

/// Constants of the arc dynamics under the linearized acceleration bounds
///   a in [-c v^2 - w(v), -c v^2 + w(v)],  w(v) = (u^2 rho^2 - v^4) / (u rho^2).
///
/// With s = v^2 the upper bound factors as (A^2 - s)(B^2 + s) / (u rho^2) and
/// the lower one as -(B^2 - s)(A^2 + s) / (u rho^2), where
/// A^2 = (kappa1 - kappa2) / 2 and B^2 = (kappa1 + kappa2) / 2.
struct ArcConstants {
  double rho = 0.0;
  double lambda0 = 0.0;  // sqrt(c^2 rho^2 + 4)
  double lambda1 = 0.0;  // sqrt(rho (lambda0 - c rho))
  double lambda2 = 0.0;  // sqrt(rho (lambda0 + c rho))
  double lambda3 = 0.0;  // (lambda0 / rho) sqrt(u / 2)
  double lambda1c = 0.0; // 1 / A
  double lambda2c = 0.0; // 1 / B
  double kappa0 = 0.0;   // rho / (2 lambda0)
  double kappa1 = 0.0;   // u rho lambda0
  double kappa2 = 0.0;   // c rho^2 u
  double a = 0.0;        // A, equal to the speed cap
  double b = 0.0;        // B
  double v_cap = 0.0;
};

ArcConstants arcConstants(double rho, const DynParams& params);

/// Highest speed at which the linearized bounds still allow a >= 0 on an arc.
double arcSpeedCap(double rho, const DynParams& params);

enum class ReachMode {
  Accel,  // highest exit speed under full acceleration
  Decel,  // highest entry speed from which full braking still ends at v_in
};

double straightReachSpeed(double length, double v_in, ReachMode mode, const DynParams& params);
double arcReachSpeed(double length, double v_in, ReachMode mode, const ArcConstants& arc, const DynParams& params);

/// Exit speed after braking fully from v_in over `length` (0 if the agent stops first).
double straightBrakeSpeed(double length, double v_in, const DynParams& params);
double arcBrakeSpeed(double length, double v_in, const ArcConstants& arc, const DynParams& params);

enum class PhaseKind { AccelDecel, AccelOnly, DecelOnly, CruiseCapped };

/// Bang-bang (or accel-cruise-brake) description of one path segment.
struct SegmentPhase {
  PhaseKind kind = PhaseKind::AccelDecel;
  double length = 0.0;
  double v0 = 0.0;
  double vf = 0.0;
  double v_sw = 0.0;      // speed where braking begins
  double gamma_sw = 0.0;  // segment-local distance where braking begins
  double t_sw = 0.0;      // segment-local time where braking begins
  double time = 0.0;
  std::optional<ArcConstants> arc;  // empty on straights
};

/// Minimum-time phase on a straight; throws InfeasibleTerminalSpeeds.
SegmentPhase straightPhase(double length, double v0, double vf, const DynParams& params);
/// Minimum-time phase on an arc under the linearized bounds; throws
/// InfeasibleTerminalSpeeds or TanhDomain.
SegmentPhase arcPhase(double length, double v0, double vf, const ArcConstants& arc, const DynParams& params);

double straightMinTime(double length, double v0, double vf, const DynParams& params);
double arcMinTime(double length, double v0, double vf, const ArcConstants& arc, const DynParams& params);

/// Speeds at the segment junctions of a path and the phase of every segment.
struct SpeedProfile {
  std::vector<double> terminal_speeds;  // size = segments + 1
  std::vector<double> forward;          // forward sweep
  std::vector<double> backward;         // backward sweep
  std::vector<double> caps;             // junction speed caps
  std::vector<SegmentPhase> phases;
  std::vector<double> start_times;      // cumulative segment start times

  double totalTime() const;
};

/// Forward/backward sweep for junction speeds followed by per-segment phases.
/// Throws InfeasibleEndpoints when the requested end speeds cannot be met.
SpeedProfile solveTerminalSpeeds(const PlannedPath& path, double v_start, double v_end, const DynParams& params);

/// Sum of segment minimum times for the profile's junction speeds.
double totalTime(const PlannedPath& path, const SpeedProfile& profile, const DynParams& params);

/// State along a profiled path at one instant.
struct TrajectorySample {
  double t = 0.0;
  double gamma = 0.0;   // path arc length
  double speed = 0.0;
  double tangential_accel = 0.0;  // dv/dt
  Vec2 position;
  Vec2 velocity;
  Vec2 accel;    // second derivative of position
  Vec2 control;  // u = accel + c |v| v
  std::size_t segment = 0;
};

/// State of one segment phase at local time t: (distance, speed, dv/dt).
struct PhaseState {
  double gamma = 0.0;
  double speed = 0.0;
  double accel = 0.0;
};
PhaseState evaluatePhase(const SegmentPhase& phase, const DynParams& params, double t);

TrajectorySample evaluateProfile(const PlannedPath& path, const SpeedProfile& profile, const DynParams& params,
                                 double t);

/// Samples at t = 0, dt, 2 dt, ... and at the exact final time.
std::vector<TrajectorySample> sampleTrajectory(const PlannedPath& path, const SpeedProfile& profile,
                                               const DynParams& params, double dt);

}  // namespace tgplan
