#include "tgplan/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tgplan/error.hpp"
#include "tgplan/log.hpp"

namespace tgplan {
namespace {

constexpr double kAtanhClamp = 1.0 - 1e-12;

double speedTol(double a, double b = 0.0) { return 1e-9 * std::max({1.0, a, b}); }

// Reach speeds come out of a square root, so a rounding error of order
// 1e-16 v^2 in v^2 shows up as ~1e-8 v near zero. Compare squares instead.
bool belowReach(double vf, double vmin, double scale) {
  return vf * vf < vmin * vmin - 1e-12 * std::max(1.0, scale * scale) && vf < vmin - speedTol(vf, vmin);
}

std::string fmtNum(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double safeAtanh(double x) {
  if (!(std::abs(x) <= 1.0 + 1e-6)) throw PlanError(ErrorKind::TanhDomain, "inverse tanh argument " + fmtNum(x));
  const double c = std::clamp(x, -kAtanhClamp, kAtanhClamp);
  if (std::abs(c - x) > 1e-9) logger().warn("inverse tanh argument {} clamped to {}", x, c);
  return std::atanh(c);
}

// atanh(sqrt(tanh(h))) for h >= 0 without overflow when tanh(h) rounds to 1.
double atanhSqrtTanh(double h) {
  const double x = std::sqrt(std::tanh(h));
  if (x < 0.9) return std::atanh(x);
  return std::log1p(x) - 0.5 * std::log(2.0) + h + 0.5 * std::log1p(std::exp(-2.0 * h));
}

// log(cosh(x1) / cosh(x0)) for 0 <= x0 <= x1.
double logCoshRatio(double x1, double x0) {
  if (x1 < 20.0) {
    const double diff = 2.0 * std::sinh(0.5 * (x1 + x0)) * std::sinh(0.5 * (x1 - x0));
    return std::log1p(diff / std::cosh(x0));
  }
  auto lncosh = [](double x) { return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0); };
  return lncosh(x1) - lncosh(x0);
}

// log(cos(a) / cos(b)) for 0 <= a <= b < pi/2.
double logCosRatio(double a, double b) {
  const double diff = -2.0 * std::sin(0.5 * (a + b)) * std::sin(0.5 * (a - b));
  return std::log1p(diff / std::cos(b));
}

void checkLength(double length) {
  if (!(length >= 0.0) || !std::isfinite(length))
    throw PlanError(ErrorKind::InfeasibleTerminalSpeeds, "segment length " + fmtNum(length) + " is not valid");
}

double belowVbar(double v, const DynParams& p) { return std::min(v, std::nextafter(p.vbar(), 0.0)); }

// Arc helpers on s = v^2.
double zOf(const ArcConstants& a, double v) { return (a.kappa2 + 2.0 * v * v) / a.kappa1; }
double yOf(const ArcConstants& a, double v) { return (a.kappa2 - 2.0 * v * v) / a.kappa1; }

// Full acceleration on an arc approaches the cap A only asymptotically, and
// near A the speed itself carries no precision. Points on that branch carry
// phi = atanh z(v), which is linear in distance, and ln(A^2 - v^2) alongside
// v. Away from the cap v is the well-conditioned coordinate, near it phi is.
struct AccelPoint {
  double v = 0.0;
  double log_gap = 0.0;
  double phi = 0.0;
};

AccelPoint accelAtSpeed(const ArcConstants& a, double v) {
  const double gap = (a.a - v) * (a.a + v);
  return {v, std::log(gap), 0.5 * std::log((a.kappa1 - gap) / gap)};
}
double logGapAtPhi(const ArcConstants& a, double phi) {
  return std::log(a.kappa1) - 2.0 * phi - std::log1p(std::exp(-2.0 * phi));
}
// Only for points with A^2 - v^2 <= A^2 / 2.
AccelPoint accelAtPhi(const ArcConstants& a, double phi) {
  const double lg = logGapAtPhi(a, phi);
  return {std::sqrt(std::max(a.a * a.a - std::exp(lg), 0.0)), lg, phi};
}
bool nearCap(const ArcConstants& a, double phi) { return std::exp(logGapAtPhi(a, phi)) < 0.5 * a.a * a.a; }

// Time antiderivatives of 1/a(v) for full acceleration and full braking on an arc.
double arcAccelClock(const ArcConstants& a, const AccelPoint& pt) {
  return (a.rho / a.lambda0) * ((std::log(a.a + pt.v) - 0.5 * pt.log_gap) / a.a + std::atan(pt.v / a.b) / a.b);
}
double arcBrakeClock(const ArcConstants& a, double v) {
  return (a.rho / a.lambda0) * (safeAtanh(v / a.b) / a.b + std::atan(v / a.a) / a.a);
}

double arcWidth(const ArcConstants& a, double v, const DynParams& p) {
  return (p.u_max * p.u_max * a.rho * a.rho - v * v * v * v) / (p.u_max * a.rho * a.rho);
}

void checkArcSpeed(double v, const ArcConstants& a, const char* name) {
  if (!(v >= 0.0) || v > a.v_cap + speedTol(a.v_cap))
    throw PlanError(ErrorKind::InfeasibleTerminalSpeeds,
                    std::string(name) + " = " + fmtNum(v) + " outside [0, arc cap " + fmtNum(a.v_cap) + "]");
}

void checkStraightSpeed(double v, const DynParams& p, const char* name) {
  if (!(v >= 0.0) || v >= p.vbar())
    throw PlanError(ErrorKind::InfeasibleTerminalSpeeds,
                    std::string(name) + " = " + fmtNum(v) + " outside [0, terminal speed " + fmtNum(p.vbar()) + ")");
}

// Bisection for the increasing function f on [lo, hi] with f(lo) <= target.
template <typename F>
double invertIncreasing(F f, double lo, double hi, double target) {
  for (int i = 0; i < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

PhaseKind classify(double& v_sw, double v0, double vf) {
  const double tol = 1e-12 * std::max(1.0, v_sw);
  if (v_sw <= vf + tol) {
    v_sw = vf;
    return PhaseKind::AccelOnly;
  }
  if (v_sw <= v0 + tol) {
    v_sw = v0;
    return PhaseKind::DecelOnly;
  }
  return PhaseKind::AccelDecel;
}

}  // namespace

double DynParams::vbar() const { return std::sqrt(u_max / c_d); }

void DynParams::validate() const {
  if (!(u_max > 0.0) || !std::isfinite(u_max))
    throw PlanError(ErrorKind::InvalidScenario, "u_max must be finite and positive");
  if (!(c_d > 0.0) || !std::isfinite(c_d)) throw PlanError(ErrorKind::InvalidScenario, "c_d must be finite and positive");
}

ArcConstants arcConstants(double rho, const DynParams& p) {
  if (!(rho > 0.0)) throw PlanError(ErrorKind::InvalidScenario, "arc radius must be positive");
  ArcConstants a;
  const double c = p.c_d, u = p.u_max;
  a.rho = rho;
  a.lambda0 = std::sqrt(rho * rho * c * c + 4.0);
  a.kappa0 = rho / (2.0 * a.lambda0);
  a.kappa1 = rho * u * a.lambda0;
  a.kappa2 = c * rho * rho * u;
  // lambda0 - c rho = 4 / (lambda0 + c rho) avoids cancellation for large c rho.
  const double minus = 4.0 / (a.lambda0 + c * rho);
  a.lambda1 = std::sqrt(rho * minus);
  a.lambda2 = std::sqrt(rho * (a.lambda0 + c * rho));
  a.lambda3 = (a.lambda0 / rho) * std::sqrt(u / 2.0);
  a.a = a.lambda1 * std::sqrt(u / 2.0);
  a.b = a.lambda2 * std::sqrt(u / 2.0);
  a.lambda1c = 1.0 / a.a;
  a.lambda2c = 1.0 / a.b;
  a.v_cap = a.a;
  return a;
}

double arcSpeedCap(double rho, const DynParams& params) { return arcConstants(rho, params).v_cap; }

double straightReachSpeed(double length, double v_in, ReachMode mode, const DynParams& p) {
  if (!(length >= 0.0) || !(v_in >= 0.0) || v_in >= p.vbar())
    throw PlanError(ErrorKind::Unreachable, "speed " + fmtNum(v_in) + " or length " + fmtNum(length) + " out of range");
  const double c = p.c_d, u = p.u_max;
  double s;
  if (mode == ReachMode::Accel) {
    const double e = std::exp(-2.0 * c * length);
    s = -u * std::expm1(-2.0 * c * length) / c + e * v_in * v_in;
  } else {
    const double e = std::exp(2.0 * c * length);
    s = u * std::expm1(2.0 * c * length) / c + e * v_in * v_in;
  }
  return belowVbar(std::sqrt(std::max(s, 0.0)), p);
}

double straightBrakeSpeed(double length, double v_in, const DynParams& p) {
  if (!(length >= 0.0) || !(v_in >= 0.0) || v_in >= p.vbar())
    throw PlanError(ErrorKind::Unreachable, "speed " + fmtNum(v_in) + " or length " + fmtNum(length) + " out of range");
  const double c = p.c_d;
  const double s = std::exp(-2.0 * c * length) * v_in * v_in + p.u_max * std::expm1(-2.0 * c * length) / c;
  return std::sqrt(std::max(s, 0.0));
}

double arcReachSpeed(double length, double v_in, ReachMode mode, const ArcConstants& a, const DynParams&) {
  if (!(length >= 0.0) || !(v_in >= 0.0) || v_in > a.v_cap + speedTol(a.v_cap))
    throw PlanError(ErrorKind::Unreachable, "speed " + fmtNum(v_in) + " or length " + fmtNum(length) + " out of range");
  if (length == 0.0) return std::min(v_in, a.v_cap);
  const double g = length * a.lambda0 / a.rho;
  double s;
  if (mode == ReachMode::Accel) {
    if (v_in >= a.v_cap) return a.v_cap;
    const double z = std::tanh(g + safeAtanh(zOf(a, v_in)));
    s = (a.kappa1 * z - a.kappa2) / 2.0;
  } else {
    const double y = std::tanh(-g + safeAtanh(yOf(a, std::min(v_in, a.v_cap))));
    s = (a.kappa2 - a.kappa1 * y) / 2.0;
  }
  return std::min(std::sqrt(std::max(s, 0.0)), a.v_cap);
}

double arcBrakeSpeed(double length, double v_in, const ArcConstants& a, const DynParams&) {
  if (!(length >= 0.0) || !(v_in >= 0.0) || v_in > a.v_cap + speedTol(a.v_cap))
    throw PlanError(ErrorKind::Unreachable, "speed " + fmtNum(v_in) + " or length " + fmtNum(length) + " out of range");
  const double y = std::tanh(length * a.lambda0 / a.rho + safeAtanh(yOf(a, std::min(v_in, a.v_cap))));
  return std::sqrt(std::max((a.kappa2 - a.kappa1 * y) / 2.0, 0.0));
}

SegmentPhase straightPhase(double length, double v0, double vf, const DynParams& p) {
  checkLength(length);
  checkStraightSpeed(v0, p, "entry speed");
  checkStraightSpeed(vf, p, "exit speed");
  const double c = p.c_d, u = p.u_max, vbar = p.vbar(), k = std::sqrt(u * c);
  const double tol = speedTol(v0, vf);
  const double vmax = straightReachSpeed(length, v0, ReachMode::Accel, p);
  const double vmin = straightBrakeSpeed(length, v0, p);
  if (vf > vmax + tol)
    throw PlanError(ErrorKind::InfeasibleTerminalSpeeds,
                    "exit speed " + fmtNum(vf) + " exceeds full-acceleration reach " + fmtNum(vmax));
  if (belowReach(vf, vmin, std::max(v0, vbar)))
    throw PlanError(ErrorKind::InfeasibleTerminalSpeeds,
                    "exit speed " + fmtNum(vf) + " is below full-braking reach " + fmtNum(vmin));

  SegmentPhase ph;
  ph.length = length;
  ph.v0 = v0;
  ph.vf = vf;
  // (u + c s) / (u - c s) = lambda  =>  s = vbar^2 tanh(log(lambda) / 2).
  const double half_log_lambda = 0.5 * (std::log1p(c * vf * vf / u) - std::log1p(-c * v0 * v0 / u) + 2.0 * c * length);
  double v_sw = std::max({vbar * std::sqrt(std::tanh(std::max(half_log_lambda, 0.0))), v0, vf});
  ph.kind = classify(v_sw, v0, vf);
  ph.v_sw = v_sw;

  double t_acc = 0.0;
  if (ph.kind != PhaseKind::DecelOnly) {
    const double hi = (ph.kind == PhaseKind::AccelDecel) ? atanhSqrtTanh(std::max(half_log_lambda, 0.0))
                                                          : std::atanh(v_sw / vbar);
    t_acc = std::max(hi - std::atanh(v0 / vbar), 0.0) / k;
  }
  const double t_dec = std::max(std::atan(v_sw / vbar) - std::atan(vf / vbar), 0.0) / k;
  ph.t_sw = t_acc;
  ph.time = t_acc + t_dec;
  switch (ph.kind) {
    case PhaseKind::AccelOnly: ph.gamma_sw = length; break;
    case PhaseKind::DecelOnly: ph.gamma_sw = 0.0; break;
    default: {
      const double brake = std::log1p(c * (v_sw * v_sw - vf * vf) / (u + c * vf * vf)) / (2.0 * c);
      ph.gamma_sw = std::clamp(length - brake, 0.0, length);
    }
  }
  return ph;
}

SegmentPhase arcPhase(double length, double v0, double vf, const ArcConstants& a, const DynParams& p) {
  checkLength(length);
  checkArcSpeed(v0, a, "entry speed");
  checkArcSpeed(vf, a, "exit speed");
  v0 = std::min(v0, a.v_cap);
  vf = std::min(vf, a.v_cap);
  const double tol = speedTol(v0, vf);
  const double scale = a.rho / a.lambda0;

  SegmentPhase ph;
  ph.length = length;
  ph.v0 = v0;
  ph.vf = vf;
  ph.arc = a;

  if (v0 >= a.v_cap - 1e-12 * std::max(1.0, a.v_cap)) {
    // At the cap the upper bound allows a = 0 only: cruise, then brake to vf.
    ph.v0 = v0 = a.v_cap;
    const double brake = scale * (safeAtanh(yOf(a, vf)) - safeAtanh(yOf(a, a.v_cap)));
    if (brake > length + 1e-9 * std::max(1.0, length))
      throw PlanError(ErrorKind::InfeasibleTerminalSpeeds,
                      "exit speed " + fmtNum(vf) + " needs " + fmtNum(brake) + " m of braking on an arc of " +
                          fmtNum(length) + " m");
    const double cruise = std::max(length - brake, 0.0);
    ph.kind = PhaseKind::CruiseCapped;
    ph.v_sw = a.v_cap;
    ph.gamma_sw = cruise;
    ph.t_sw = cruise / a.v_cap;
    ph.time = ph.t_sw + std::max(arcBrakeClock(a, a.v_cap) - arcBrakeClock(a, vf), 0.0);
    return ph;
  }

  const double vmax = arcReachSpeed(length, v0, ReachMode::Accel, a, p);
  const double vmin = arcBrakeSpeed(length, v0, a, p);
  if (vf > vmax + tol)
    throw PlanError(ErrorKind::InfeasibleTerminalSpeeds,
                    "exit speed " + fmtNum(vf) + " exceeds arc acceleration reach " + fmtNum(vmax));
  if (belowReach(vf, vmin, a.b))
    throw PlanError(ErrorKind::InfeasibleTerminalSpeeds,
                    "exit speed " + fmtNum(vf) + " is below arc braking reach " + fmtNum(vmin));

  // Accelerating distance plus braking distance equals the arc length:
  // atanh z(s) - atanh y(s) = h, a quadratic in 2s; the smaller root is physical.
  const double h = length / scale + safeAtanh(zOf(a, v0)) - safeAtanh(yOf(a, vf));
  const double r = std::tanh(std::max(h, 0.0));
  const double pp = a.kappa1, qq = a.kappa2;
  const double d2 = (pp - qq) * (pp + qq);
  const double s = d2 * r / (2.0 * (pp + std::sqrt(std::max(pp * pp - r * r * d2, 0.0))));
  double v_sw = std::clamp(std::sqrt(std::max(s, 0.0)), std::max(v0, vf), a.v_cap);
  ph.kind = classify(v_sw, v0, vf);
  switch (ph.kind) {
    case PhaseKind::AccelOnly: ph.gamma_sw = length; break;
    case PhaseKind::DecelOnly: ph.gamma_sw = 0.0; break;
    default: {
      const double brake = scale * (safeAtanh(yOf(a, vf)) - safeAtanh(yOf(a, v_sw)));
      ph.gamma_sw = std::clamp(length - brake, 0.0, length);
    }
  }
  // The accelerating part is timed by its distance, not by v_sw, which may
  // have rounded onto the cap.
  double t_acc = 0.0;
  if (ph.kind != PhaseKind::DecelOnly) {
    const AccelPoint p0 = accelAtSpeed(a, v0);
    const double phi_sw = p0.phi + ph.gamma_sw / scale;
    const AccelPoint top = nearCap(a, phi_sw) ? accelAtPhi(a, phi_sw) : accelAtSpeed(a, v_sw);
    t_acc = arcAccelClock(a, top) - arcAccelClock(a, p0);
    if (ph.kind == PhaseKind::AccelDecel) v_sw = std::max(top.v, v0);
  }
  ph.v_sw = v_sw;
  const double t_dec = arcBrakeClock(a, v_sw) - arcBrakeClock(a, vf);
  ph.t_sw = std::max(t_acc, 0.0);
  ph.time = ph.t_sw + std::max(t_dec, 0.0);
  return ph;
}

double straightMinTime(double length, double v0, double vf, const DynParams& params) {
  return straightPhase(length, v0, vf, params).time;
}

double arcMinTime(double length, double v0, double vf, const ArcConstants& arc, const DynParams& params) {
  return arcPhase(length, v0, vf, arc, params).time;
}

double SpeedProfile::totalTime() const {
  double t = 0.0;
  for (const auto& ph : phases) t += ph.time;
  return t;
}

SpeedProfile solveTerminalSpeeds(const PlannedPath& path, double v_start, double v_end, const DynParams& params) {
  params.validate();
  const auto segs = path.segments();
  const std::size_t n = segs.size();
  SpeedProfile prof;
  std::vector<std::optional<ArcConstants>> arcs(n);
  prof.caps.assign(n + 1, std::nextafter(params.vbar(), 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    if (!segs[j].isArc()) continue;
    arcs[j] = arcConstants(segs[j].arc().radius, params);
    prof.caps[j] = std::min(prof.caps[j], arcs[j]->v_cap);
    prof.caps[j + 1] = std::min(prof.caps[j + 1], arcs[j]->v_cap);
  }
  const double tol_s = speedTol(v_start), tol_e = speedTol(v_end);
  if (!(v_start >= 0.0) || v_start > prof.caps[0] + tol_s)
    throw PlanError(ErrorKind::InfeasibleEndpoints,
                    "start speed " + fmtNum(v_start) + " exceeds the first segment cap " + fmtNum(prof.caps[0]));
  if (!(v_end >= 0.0) || v_end > prof.caps[n] + tol_e)
    throw PlanError(ErrorKind::InfeasibleEndpoints,
                    "end speed " + fmtNum(v_end) + " exceeds the last segment cap " + fmtNum(prof.caps[n]));
  v_start = std::min(v_start, prof.caps[0]);
  v_end = std::min(v_end, prof.caps[n]);

  auto reach = [&](std::size_t j, double v, ReachMode mode) {
    return arcs[j] ? arcReachSpeed(segs[j].length, v, mode, *arcs[j], params)
                   : straightReachSpeed(segs[j].length, v, mode, params);
  };
  prof.forward.assign(n + 1, 0.0);
  prof.backward.assign(n + 1, 0.0);
  prof.forward[0] = v_start;
  for (std::size_t j = 0; j < n; ++j)
    prof.forward[j + 1] = std::min(reach(j, prof.forward[j], ReachMode::Accel), prof.caps[j + 1]);
  prof.backward[n] = v_end;
  for (std::size_t j = n; j-- > 0;)
    prof.backward[j] = std::min(reach(j, prof.backward[j + 1], ReachMode::Decel), prof.caps[j]);
  if (v_end > prof.forward[n] + tol_e)
    throw PlanError(ErrorKind::InfeasibleEndpoints, "end speed " + fmtNum(v_end) +
                                                        " is above the highest reachable speed " +
                                                        fmtNum(prof.forward[n]));
  if (v_start > prof.backward[0] + tol_s)
    throw PlanError(ErrorKind::InfeasibleEndpoints, "start speed " + fmtNum(v_start) +
                                                        " is too high to brake to the end speed; limit " +
                                                        fmtNum(prof.backward[0]));

  prof.terminal_speeds.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prof.terminal_speeds[j] = std::min(prof.forward[j], prof.backward[j]);
  prof.terminal_speeds[0] = v_start;
  prof.terminal_speeds[n] = v_end;

  double t = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double v0 = prof.terminal_speeds[j], vf = prof.terminal_speeds[j + 1];
    prof.phases.push_back(arcs[j] ? arcPhase(segs[j].length, v0, vf, *arcs[j], params)
                                  : straightPhase(segs[j].length, v0, vf, params));
    prof.start_times.push_back(t);
    t += prof.phases.back().time;
  }
  return prof;
}

double totalTime(const PlannedPath& path, const SpeedProfile& profile, const DynParams& params) {
  const auto segs = path.segments();
  if (profile.terminal_speeds.size() != segs.size() + 1)
    throw PlanError(ErrorKind::InfeasibleTerminalSpeeds, "profile does not match the path");
  double t = 0.0;
  for (std::size_t j = 0; j < segs.size(); ++j) {
    const double v0 = profile.terminal_speeds[j], vf = profile.terminal_speeds[j + 1];
    t += segs[j].isArc() ? arcMinTime(segs[j].length, v0, vf, arcConstants(segs[j].arc().radius, params), params)
                         : straightMinTime(segs[j].length, v0, vf, params);
  }
  return t;
}

PhaseState evaluatePhase(const SegmentPhase& ph, const DynParams& p, double t) {
  t = std::clamp(t, 0.0, ph.time);
  PhaseState st;
  const double c = p.c_d, u = p.u_max;
  const bool accelerating = ph.kind == PhaseKind::AccelOnly || (ph.kind != PhaseKind::DecelOnly && t <= ph.t_sw);
  const double tau = t - ph.t_sw;

  if (!ph.arc) {
    const double vbar = p.vbar(), k = std::sqrt(u * c);
    if (accelerating) {
      const double phi0 = std::atanh(ph.v0 / vbar);
      const double x = k * t + phi0;
      st.speed = vbar * std::tanh(x);
      st.gamma = logCoshRatio(x, phi0) / c;
      st.accel = u - c * st.speed * st.speed;
    } else {
      const double psi_sw = std::atan(ph.v_sw / vbar);
      const double psi = std::max(psi_sw - k * tau, 0.0);
      st.speed = vbar * std::tan(psi);
      st.gamma = ph.gamma_sw + logCosRatio(psi, psi_sw) / c;
      st.accel = -u - c * st.speed * st.speed;
    }
    st.gamma = std::clamp(st.gamma, 0.0, ph.length);
    return st;
  }

  const ArcConstants& a = *ph.arc;
  const double scale = a.rho / a.lambda0;
  if (ph.kind == PhaseKind::CruiseCapped && t <= ph.t_sw) {
    st.speed = a.v_cap;
    st.gamma = a.v_cap * t;
    st.accel = 0.0;
  } else if (accelerating) {
    const AccelPoint p0 = accelAtSpeed(a, ph.v0);
    const double base = arcAccelClock(a, p0);
    const double phi_sw = p0.phi + ph.gamma_sw / scale;
    // Invert in v below the gap A^2 / 2 and in phi above it.
    const double v_split = a.a * std::sqrt(0.5);
    const AccelPoint split = accelAtSpeed(a, v_split);
    AccelPoint pt;
    if (ph.v0 < v_split && (phi_sw <= split.phi || t <= arcAccelClock(a, split) - base)) {
      const double hi = phi_sw <= split.phi ? ph.v_sw : v_split;
      pt = accelAtSpeed(a, invertIncreasing([&](double v) { return arcAccelClock(a, accelAtSpeed(a, v)) - base; },
                                            ph.v0, hi, t));
    } else {
      const double lo = std::max(p0.phi, split.phi);
      pt = accelAtPhi(a, invertIncreasing([&](double x) { return arcAccelClock(a, accelAtPhi(a, x)) - base; }, lo,
                                          phi_sw, t));
    }
    st.speed = pt.v;
    st.gamma = scale * (pt.phi - p0.phi);
    st.accel = -c * st.speed * st.speed + arcWidth(a, st.speed, p);
  } else {
    const double top = arcBrakeClock(a, ph.v_sw);
    // D(v_sw) - D(v) = tau  <=>  D(v) = D(v_sw) - tau, increasing in v.
    st.speed = invertIncreasing([&](double v) { return arcBrakeClock(a, v); }, ph.vf, ph.v_sw, top - tau);
    st.gamma = ph.gamma_sw + scale * (safeAtanh(yOf(a, st.speed)) - safeAtanh(yOf(a, ph.v_sw)));
    st.accel = -c * st.speed * st.speed - arcWidth(a, st.speed, p);
  }
  st.gamma = std::clamp(st.gamma, 0.0, ph.length);
  return st;
}

TrajectorySample evaluateProfile(const PlannedPath& path, const SpeedProfile& profile, const DynParams& params,
                                 double t) {
  const auto segs = path.segments();
  const double total = profile.totalTime();
  t = std::clamp(t, 0.0, total);
  std::size_t j = 0;
  if (!profile.start_times.empty()) {
    auto it = std::upper_bound(profile.start_times.begin(), profile.start_times.end(), t);
    j = static_cast<std::size_t>(std::distance(profile.start_times.begin(), it));
    j = j == 0 ? 0 : j - 1;
  }
  TrajectorySample s;
  s.t = t;
  s.segment = j;
  if (segs.empty() || profile.phases.empty()) return s;
  // Skip zero-duration segments sitting at the same start time.
  while (j + 1 < profile.phases.size() && t >= profile.start_times[j] + profile.phases[j].time &&
         profile.phases[j].time == 0.0)
    ++j;
  const PathSegment& seg = segs[j];
  const PhaseState st = evaluatePhase(profile.phases[j], params, t - profile.start_times[j]);
  const Vec2 tan = seg.tangentAt(st.gamma);
  const Vec2 curv = seg.curvatureAt(st.gamma);
  s.segment = j;
  s.gamma = seg.offset + st.gamma;
  s.speed = st.speed;
  s.tangential_accel = st.accel;
  s.position = seg.pointAt(st.gamma);
  s.velocity = tan * st.speed;
  s.accel = tan * st.accel + curv * (st.speed * st.speed);
  s.control = tan * (st.accel + params.c_d * st.speed * st.speed) + curv * (st.speed * st.speed);
  return s;
}

std::vector<TrajectorySample> sampleTrajectory(const PlannedPath& path, const SpeedProfile& profile,
                                               const DynParams& params, double dt) {
  if (!(dt > 0.0)) throw PlanError(ErrorKind::InvalidScenario, "dt must be positive");
  const double total = profile.totalTime();
  std::vector<TrajectorySample> out;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t >= total - 1e-9 * dt) break;
    out.push_back(evaluateProfile(path, profile, params, t));
  }
  out.push_back(evaluateProfile(path, profile, params, total));
  return out;
}

}  // namespace tgplan
