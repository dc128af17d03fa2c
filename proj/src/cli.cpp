#include "tgplan/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "tgplan/log.hpp"

namespace tgplan {
namespace {

const char* phaseName(PhaseKind k) {
  switch (k) {
    case PhaseKind::AccelDecel: return "accel-decel";
    case PhaseKind::AccelOnly: return "accel";
    case PhaseKind::DecelOnly: return "decel";
    case PhaseKind::CruiseCapped: return "cruise-decel";
  }
  return "?";
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

bool writeFile(const std::filesystem::path& p, const std::string& content, std::ostream& err) {
  std::ofstream f(p, std::ios::binary);
  f << content;
  if (!f) {
    err << "error: cannot write " << p.string() << "\n";
    return false;
  }
  return true;
}

}  // namespace

int exitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoPath: return kExitNoPath;
    case ErrorKind::InvalidScenario:
    case ErrorKind::InvalidPolygon:
    case ErrorKind::OverlappingObstacles:
    case ErrorKind::PointInsideObstacle:
    case ErrorKind::InfeasibleEndpoints: return kExitInvalidScenario;
    default: return kExitInternal;
  }
}

PathPlan planPath(const Scenario& s, bool filter) {
  PathPlan g;
  g.obstacles = s.inflated();
  g.full = attachTerminals(buildRoadmap(g.obstacles), s.start, s.goal);
  g.km = kappaM(g.obstacles);
  g.used = filter ? ellipseFilter(g.full, g.km) : g.full;
  g.path = shortestPath(g.used);
  return g;
}

PlanResult planScenario(const Scenario& s, double dt, bool filter) {
  PlanResult r;
  r.geometry = planPath(s, filter);
  r.profile = solveTerminalSpeeds(r.geometry.path, s.v_start, s.v_end, s.params);
  r.samples = sampleTrajectory(r.geometry.path, r.profile, s.params, dt);
  AuditTarget target{s.start, s.goal, s.v_start, s.v_end, r.geometry.path};
  const auto rows = toRows(r.samples);
  r.audit = auditTrajectory(rows, r.geometry.obstacles, s.params, target);
  return r;
}

TrajectoryFile makeTrajectoryFile(const Scenario& s, const PlanResult& plan, double dt, bool filter) {
  TrajectoryFile t;
  t.scenario_hash = scenarioHash(s);
  t.params = s.params;
  t.inflation = s.inflation;
  t.v_start = s.v_start;
  t.v_end = s.v_end;
  t.total_time = plan.profile.totalTime();
  t.path_length = plan.geometry.path.totalLength();
  t.dt = dt;
  t.filtered = filter;
  t.rows = toRows(plan.samples);
  return t;
}

std::string renderReport(const Scenario& s, const PlanResult& plan) {
  const auto& g = plan.geometry;
  std::ostringstream os;
  os << "scenario hash      " << scenarioHash(s) << "\n";
  os << "obstacles          " << g.obstacles.size() << "\n";
  os << "total time         " << fixed(plan.profile.totalTime()) << " s\n";
  os << "path length        " << fixed(g.path.totalLength()) << " m\n";
  os << "K_m                " << fixed(g.km) << "\n";
  os << "roadmap nodes      " << g.full.activeNodeCount() << " (after filter " << g.used.activeNodeCount() << ")\n";
  os << "roadmap edges      " << g.full.edges().size() << " (after filter " << g.used.edges().size() << ")\n";
  os << "segments           " << g.path.straightCount() << " straight, " << g.path.arcCount() << " arc\n";
  os << "\n  #  kind      length        v0        vf      v_sw      time  phase\n";
  const auto segs = g.path.segments();
  for (std::size_t j = 0; j < segs.size(); ++j) {
    const auto& ph = plan.profile.phases[j];
    char line[160];
    std::snprintf(line, sizeof line, "%3zu  %-8s %9.4f %9.4f %9.4f %9.4f %9.4f  %s\n", j,
                  segs[j].isArc() ? "arc" : "straight", ph.length, ph.v0, ph.vf, ph.v_sw, ph.time,
                  phaseName(ph.kind));
    os << line;
  }
  os << "\naudit\n" << plan.audit.summary();
  return os.str();
}

std::string renderSvg(const Scenario& s, const PlanResult& plan) {
  const auto& g = plan.geometry;
  double minx = std::min(s.start.x, s.goal.x), maxx = std::max(s.start.x, s.goal.x);
  double miny = std::min(s.start.y, s.goal.y), maxy = std::max(s.start.y, s.goal.y);
  std::vector<std::vector<Vec2>> outlines;
  for (const auto& o : g.obstacles) {
    std::vector<Vec2> pts;
    const int n = 240;
    for (int i = 0; i < n; ++i) pts.push_back(o.point(o.perimeter() * i / n));
    for (const auto& p : pts) {
      minx = std::min(minx, p.x), maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y), maxy = std::max(maxy, p.y);
    }
    outlines.push_back(std::move(pts));
  }
  const double width = 800.0, pad = 20.0;
  const double span = std::max({maxx - minx, maxy - miny, 1e-9});
  const double k = (width - 2 * pad) / span;
  const double height = (maxy - miny) * k + 2 * pad + 140.0;
  auto X = [&](double x) { return fixed((x - minx) * k + pad, 2); };
  auto Y = [&](double y) { return fixed((maxy - y) * k + pad, 2); };
  auto poly = [&](const std::vector<Vec2>& pts) {
    std::string out;
    for (const auto& p : pts) out += X(p.x) + "," + Y(p.y) + " ";
    return out;
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
     << fixed(height, 0) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < g.obstacles.size(); ++i) {
    os << "<polygon points=\"" << poly(outlines[i]) << "\" fill=\"#dddddd\" stroke=\"#999999\"/>\n";
    std::vector<Vec2> src(g.obstacles[i].source().vertices().begin(), g.obstacles[i].source().vertices().end());
    os << "<polygon points=\"" << poly(src) << "\" fill=\"#888888\"/>\n";
  }
  const auto nodes = g.full.nodes();
  for (const auto& e : g.full.edges()) {
    if (e.kind != EdgeKind::Tangent || e.from > e.to) continue;
    os << "<line x1=\"" << X(nodes[e.from].point.x) << "\" y1=\"" << Y(nodes[e.from].point.y) << "\" x2=\""
       << X(nodes[e.to].point.x) << "\" y2=\"" << Y(nodes[e.to].point.y)
       << "\" stroke=\"#c8d8f0\" stroke-width=\"0.7\"/>\n";
  }
  std::vector<Vec2> trace;
  const double len = g.path.totalLength();
  const int m = 1000;
  for (int i = 0; i <= m; ++i) trace.push_back(g.path.point(len * i / m));
  os << "<polyline points=\"" << poly(trace) << "\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\"/>\n";
  os << "<circle cx=\"" << X(s.start.x) << "\" cy=\"" << Y(s.start.y) << "\" r=\"4\" fill=\"#2a9d2a\"/>\n";
  os << "<circle cx=\"" << X(s.goal.x) << "\" cy=\"" << Y(s.goal.y) << "\" r=\"4\" fill=\"#c0392b\"/>\n";

  // Speed against distance along the path.
  const double ix = pad, iy = height - 130.0, iw = width - 2 * pad, ih = 110.0;
  os << "<rect x=\"" << fixed(ix, 2) << "\" y=\"" << fixed(iy, 2) << "\" width=\"" << fixed(iw, 2)
     << "\" height=\"" << fixed(ih, 2) << "\" fill=\"none\" stroke=\"#444444\"/>\n";
  double vmax = 1e-9;
  for (const auto& smp : plan.samples) vmax = std::max(vmax, smp.speed);
  const std::size_t stride = std::max<std::size_t>(1, plan.samples.size() / 800);
  std::string pts;
  for (std::size_t i = 0; i < plan.samples.size(); i += stride) {
    const auto& smp = plan.samples[i];
    const double px = ix + (len > 0 ? smp.gamma / len : 0.0) * iw;
    const double py = iy + ih - smp.speed / vmax * ih;
    pts += fixed(px, 2) + "," + fixed(py, 2) + " ";
  }
  os << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"#d35400\" stroke-width=\"1.5\"/>\n";
  os << "<text x=\"" << fixed(ix + 4, 2) << "\" y=\"" << fixed(iy + 14, 2)
     << "\" font-family=\"sans-serif\" font-size=\"11\">speed vs distance, max " << fixed(vmax, 3)
     << " m/s</text>\n";
  os << "</svg>\n";
  return os.str();
}

int planCommand(const PlanOptions& opts, std::ostream& out, std::ostream& err) {
  Scenario s;
  try {
    s = loadScenario(opts.scenario);
  } catch (const PlanError& e) {
    err << "error: " << e.what() << "\n";
    return exitCodeFor(e.kind());
  }
  if (!(opts.dt > 0.0)) {
    err << "error: --dt must be positive\n";
    return kExitInvalidScenario;
  }
  PlanResult plan;
  try {
    plan = planScenario(s, opts.dt, opts.filter);
  } catch (const PlanError& e) {
    err << "error: " << e.what() << "\n";
    return exitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  const std::filesystem::path dir(opts.out_dir);
  std::ostringstream traj;
  writeTrajectory(traj, makeTrajectoryFile(s, plan, opts.dt, opts.filter));
  const std::string report = renderReport(s, plan);
  if (!writeFile(dir / "trajectory.txt", traj.str(), err) || !writeFile(dir / "report.txt", report, err))
    return kExitInternal;
  if (opts.svg && !writeFile(dir / "plan.svg", renderSvg(s, plan), err)) return kExitInternal;
  out << report;
  if (!plan.audit.passed()) {
    err << "error: planned trajectory failed its own audit\n";
    return kExitAuditFailure;
  }
  return kExitOk;
}

int verifyCommand(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  Scenario s;
  TrajectoryFile traj;
  try {
    s = loadScenario(opts.scenario);
    std::ifstream f(opts.trajectory);
    if (!f) throw PlanError(ErrorKind::InvalidScenario, "cannot open trajectory file '" + opts.trajectory + "'");
    traj = readTrajectory(f);
  } catch (const PlanError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidScenario;
  }
  const std::string hash = scenarioHash(s);
  if (traj.scenario_hash != hash) {
    err << "error: scenario hash mismatch: trajectory has " << traj.scenario_hash << ", scenario is " << hash
        << "\n";
    return kExitInvalidScenario;
  }
  PathPlan geometry;
  try {
    geometry = planPath(s, traj.filtered);
  } catch (const PlanError& e) {
    err << "error: " << e.what() << "\n";
    return exitCodeFor(e.kind());
  }
  AuditTarget target{s.start, s.goal, s.v_start, s.v_end, geometry.path};
  const AuditReport rep = auditTrajectory(traj.rows, geometry.obstacles, s.params, target, opts.tolerances);
  out << rep.summary();
  return rep.passed() ? kExitOk : kExitAuditFailure;
}

}  // namespace tgplan
