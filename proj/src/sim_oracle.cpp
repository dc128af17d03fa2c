#include "tgplan/sim_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tgplan/error.hpp"

namespace tgplan {
namespace {

struct Deriv {
  Vec2 dr, dv;
};

void checkControl(const Vec2& u, double t, const DynParams& p) {
  const double n = u.norm();
  if (!(n <= p.u_max * (1.0 + 1e-9))) {
    std::ostringstream os;
    os << "|u| = " << n << " exceeds " << p.u_max << " at t = " << t;
    throw PlanError(ErrorKind::ControlBoundViolation, os.str());
  }
}

}  // namespace

std::vector<SimState> integrate2d(const ControlLaw& control, const SimState& initial, double dt, double t_end,
                                  const DynParams& params) {
  if (!(dt > 0.0)) throw PlanError(ErrorKind::InvalidScenario, "dt must be positive");
  params.validate();
  auto f = [&](double t, const Vec2& r, const Vec2& v) {
    const SimState s{t, r, v};
    const Vec2 u = control(t, s);
    checkControl(u, t, params);
    return Deriv{v, u - v * (params.c_d * v.norm())};
  };
  std::vector<SimState> out{initial};
  SimState s = initial;
  while (s.t < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
    const double h = std::min(dt, t_end - s.t);
    const Deriv k1 = f(s.t, s.r, s.v);
    const Deriv k2 = f(s.t + h / 2, s.r + k1.dr * (h / 2), s.v + k1.dv * (h / 2));
    const Deriv k3 = f(s.t + h / 2, s.r + k2.dr * (h / 2), s.v + k2.dv * (h / 2));
    const Deriv k4 = f(s.t + h, s.r + k3.dr * h, s.v + k3.dv * h);
    s.r += (k1.dr + k2.dr * 2.0 + k3.dr * 2.0 + k4.dr) * (h / 6);
    s.v += (k1.dv + k2.dv * 2.0 + k3.dv * 2.0 + k4.dv) * (h / 6);
    s.t = (s.t + h >= t_end) ? t_end : initial.t + dt * static_cast<double>(out.size());
    out.push_back(s);
  }
  return out;
}

double lawAccel(AccelLaw law, double v, double rho, const DynParams& p) {
  const double c = p.c_d, u = p.u_max;
  switch (law) {
    case AccelLaw::StraightAccel: return u - c * v * v;
    case AccelLaw::StraightDecel: return -u - c * v * v;
    case AccelLaw::ArcApproxAccel: return -c * v * v + (u * u * rho * rho - v * v * v * v) / (u * rho * rho);
    case AccelLaw::ArcApproxDecel: return -c * v * v - (u * u * rho * rho - v * v * v * v) / (u * rho * rho);
    case AccelLaw::ArcExactAccel:
      return -c * v * v + std::sqrt(std::max(u * u - v * v * v * v / (rho * rho), 0.0));
    case AccelLaw::ArcExactDecel:
      return -c * v * v - std::sqrt(std::max(u * u - v * v * v * v / (rho * rho), 0.0));
  }
  return 0.0;
}

double lawSpeedBand(AccelLaw law, double rho, const DynParams& p) {
  switch (law) {
    case AccelLaw::StraightAccel:
    case AccelLaw::StraightDecel: return p.vbar();
    case AccelLaw::ArcApproxAccel: return arcSpeedCap(rho, p);
    case AccelLaw::ArcApproxDecel:
    case AccelLaw::ArcExactAccel:
    case AccelLaw::ArcExactDecel: return std::sqrt(p.u_max * rho);
  }
  return 0.0;
}

PathIntegration integratePath(double length, double rho, AccelLaw law, double v0, double dt, const DynParams& p,
                              bool reverse, std::optional<double> v_stop, double t_max) {
  if (!(dt > 0.0)) throw PlanError(ErrorKind::InvalidScenario, "dt must be positive");
  const double band = lawSpeedBand(law, rho, p);
  const double band_tol = 1e-9 * std::max(1.0, band);
  if (!(v0 >= 0.0) || v0 > band + band_tol)
    throw PlanError(ErrorKind::CapExceeded, "initial speed outside the feasible band");
  const double sign = reverse ? -1.0 : 1.0;
  auto acc = [&](double v) { return sign * lawAccel(law, v, rho, p); };

  // One RK4 step of size h from (g, v).
  auto step = [&](double g, double v, double h) {
    const double a1 = acc(v);
    const double v2 = v + a1 * h / 2, a2 = acc(v2);
    const double v3 = v + a2 * h / 2, a3 = acc(v3);
    const double v4 = v + a3 * h, a4 = acc(v4);
    return std::pair{g + (v + 2 * v2 + 2 * v3 + v4) * h / 6, v + (a1 + 2 * a2 + 2 * a3 + a4) * h / 6};
  };

  PathIntegration res;
  res.table.push_back({0.0, 0.0, v0});
  double t = 0.0, g = 0.0, v = v0;
  if (length <= 0.0) {
    res.completed = true;
    return res;
  }
  while (t < t_max) {
    auto [g1, v1] = step(g, v, dt);
    auto event = [&](double ge, double ve) { return ge >= length || ve <= 0.0 || (v_stop && ve >= *v_stop); };
    if (event(g1, v1)) {
      // Shorten the step so the first event lands exactly.
      double lo = 0.0, hi = dt;
      for (int i = 0; i < 200 && hi - lo > 1e-18; ++i) {
        const double mid = 0.5 * (lo + hi);
        const auto [gm, vm] = step(g, v, mid);
        (event(gm, vm) ? hi : lo) = mid;
      }
      auto [ge, ve] = step(g, v, hi);
      t += hi;
      res.completed = ge >= length;
      res.stopped = !res.completed && ve <= 0.0;
      res.reached_speed = !res.completed && !res.stopped;
      g = res.completed ? length : ge;
      v = res.stopped ? 0.0 : std::max(ve, 0.0);
      res.table.push_back({t, g, v});
      break;
    }
    t += dt;
    g = g1;
    v = v1;
    if (v > band + band_tol) {
      std::ostringstream os;
      os << "speed " << v << " left the feasible band " << band << " at t = " << t;
      throw PlanError(ErrorKind::CapExceeded, os.str());
    }
    res.table.push_back({t, g, v});
  }
  res.time = t;
  res.distance = g;
  return res;
}

std::string AuditReport::summary() const {
  std::ostringstream os;
  os.precision(6);
  os << "max |u|            " << max_control << " (row " << max_control_row << ")\n";
  os << "max speed          " << max_speed << "\n";
  os << "min clearance      " << min_clearance << "\n";
  for (std::size_t k = 0; k < clearance.size(); ++k) os << "  obstacle " << k << "       " << clearance[k] << "\n";
  os << "path deviation     " << max_path_deviation << "\n";
  os << "arc speed excess   " << max_arc_speed_excess << "\n";
  os << "kinematic residual " << max_kinematic_residual << "\n";
  os << "start error        " << start_error << "\n";
  os << "final error        " << final_error << "\n";
  os << (passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& f : failures) os << "  " << f.check << " at row " << f.row << ": " << f.detail << "\n";
  return os.str();
}

AuditReport auditTrajectory(std::span<const TrajectoryRow> rows, std::span<const InflatedObstacle> obstacles,
                            const DynParams& params, const AuditTarget& target, const AuditTolerances& tol) {
  AuditReport rep;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  rep.clearance.assign(obstacles.size(), kInf);
  rep.min_clearance = kInf;
  rep.max_arc_speed_excess = -kInf;
  auto fail = [&](const char* check, std::size_t row, const std::string& detail) {
    rep.failures.push_back({check, row, detail});
  };
  auto num = [](double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
  };
  if (rows.empty()) {
    fail("rows", 0, "trajectory is empty");
    return rep;
  }

  std::vector<std::optional<ArcConstants>> arcs;
  if (target.path)
    for (const auto& seg : target.path->segments())
      arcs.push_back(seg.isArc() ? std::optional(arcConstants(seg.arc().radius, params)) : std::nullopt);

  bool control_failed = false, clearance_failed = false, speed_failed = false, deviation_failed = false,
       arc_failed = false, kin_failed = false, time_failed = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TrajectoryRow& row = rows[i];
    const double un = row.u.norm();
    if (un > rep.max_control || i == 0) {
      rep.max_control = un;
      rep.max_control_row = i;
    }
    if (!(un <= params.u_max * (1.0 + tol.control_rel)) && !control_failed) {
      fail("control-bound", i, "|u| = " + num(un) + " at t = " + num(row.t));
      control_failed = true;
    }
    const double speed = row.v.norm();
    rep.max_speed = std::max(rep.max_speed, speed);
    if (!(speed < params.vbar()) && !speed_failed) {
      fail("speed-limit", i, "speed " + num(speed) + " at t = " + num(row.t));
      speed_failed = true;
    }
    for (std::size_t k = 0; k < obstacles.size(); ++k) {
      const double d = obstacles[k].signedDistance(row.r);
      rep.clearance[k] = std::min(rep.clearance[k], d);
      rep.min_clearance = std::min(rep.min_clearance, d);
      if (!(d >= tol.clearance) && !clearance_failed) {
        fail("clearance", i, "obstacle " + std::to_string(k) + " penetrated by " + num(-d) + " at t = " + num(row.t));
        clearance_failed = true;
      }
    }
    if (i > 0) {
      const TrajectoryRow& prev = rows[i - 1];
      const double h = row.t - prev.t;
      if (!(h > 0.0) && !time_failed) {
        fail("time-order", i, "time does not increase");
        time_failed = true;
      }
      const double kin = ((row.r - prev.r) - (row.v + prev.v) * (h / 2)).norm();
      rep.max_kinematic_residual = std::max(rep.max_kinematic_residual, kin);
      if (!(kin <= tol.kinematic + tol.kinematic_scale * params.u_max * h * h) && !kin_failed) {
        fail("kinematics", i, "position/velocity mismatch " + num(kin) + " m at t = " + num(row.t));
        kin_failed = true;
      }
    }
    if (target.path) {
      const PlannedPath& path = *target.path;
      const double g = std::clamp(row.gamma, 0.0, path.totalLength());
      const double dev = distance(path.point(g), row.r);
      rep.max_path_deviation = std::max(rep.max_path_deviation, dev);
      if (!(dev <= tol.path_deviation) && !deviation_failed) {
        fail("path-deviation", i, num(dev) + " m at t = " + num(row.t));
        deviation_failed = true;
      }
      const std::size_t j = path.segmentIndex(g);
      // Junction rows belong to both neighbours; check against the tighter cap.
      double cap = kInf;
      for (std::size_t jj : {j, j > 0 ? j - 1 : j}) {
        const auto& seg = path.segments()[jj];
        if (arcs[jj] && g >= seg.offset - 1e-12 && g <= seg.offset + seg.length + 1e-12)
          cap = std::min(cap, arcs[jj]->v_cap);
      }
      if (cap < kInf) {
        rep.max_arc_speed_excess = std::max(rep.max_arc_speed_excess, speed - cap);
        if (speed > cap + tol.arc_speed && !arc_failed) {
          fail("arc-speed", i, "speed " + num(speed) + " above arc cap " + num(cap) + " at t = " + num(row.t));
          arc_failed = true;
        }
      }
    }
  }
  const TrajectoryRow& first = rows.front();
  const TrajectoryRow& last = rows.back();
  rep.start_error = std::max(distance(first.r, target.start), std::abs(first.v.norm() - target.v_start));
  rep.final_error = std::max(distance(last.r, target.goal), std::abs(last.v.norm() - target.v_end));
  if (!(rep.start_error <= tol.terminal)) fail("start-state", 0, "error " + num(rep.start_error));
  if (!(rep.final_error <= tol.terminal)) fail("final-state", rows.size() - 1, "error " + num(rep.final_error));
  return rep;
}

std::vector<TrajectoryRow> toRows(std::span<const TrajectorySample> samples) {
  std::vector<TrajectoryRow> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.push_back({s.t, s.position, s.velocity, s.control, s.gamma});
  return rows;
}

}  // namespace tgplan
