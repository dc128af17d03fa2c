#include "tgplan/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "tgplan/error.hpp"

namespace tgplan {
namespace {

[[noreturn]] void bad(std::size_t line, const std::string& what) {
  throw PlanError(ErrorKind::InvalidScenario, "line " + std::to_string(line) + ": " + what);
}

double parseNumber(const std::string& tok, std::size_t line, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    bad(line, field + ": '" + tok + "' is not a finite number");
  }
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line.substr(0, line.find('#')));
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

}  // namespace

std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<InflatedObstacle> Scenario::inflated() const {
  std::vector<InflatedObstacle> out;
  out.reserve(obstacles.size());
  for (const auto& p : obstacles) out.push_back(inflatePolygon(p, inflation));
  return out;
}

Scenario parseScenario(std::istream& in) {
  Scenario s;
  bool have_inflation = false, have_start = false, have_goal = false, have_u = false, have_c = false;
  std::string text;
  std::size_t n = 0;
  std::set<std::string> seen;
  while (std::getline(in, text)) {
    ++n;
    const auto tok = tokens(text);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    if (key != "obstacle" && !seen.insert(key).second) bad(n, "duplicate field '" + key + "'");
    auto scalar = [&](double& dst, bool* flag) {
      if (tok.size() != 2) bad(n, key + ": expected 1 value, got " + std::to_string(tok.size() - 1));
      dst = parseNumber(tok[1], n, key);
      if (flag) *flag = true;
    };
    auto point = [&](Vec2& dst, bool& flag) {
      if (tok.size() != 3) bad(n, key + ": expected 2 values, got " + std::to_string(tok.size() - 1));
      dst = {parseNumber(tok[1], n, key), parseNumber(tok[2], n, key)};
      flag = true;
    };
    if (key == "inflation") scalar(s.inflation, &have_inflation);
    else if (key == "start") point(s.start, have_start);
    else if (key == "goal") point(s.goal, have_goal);
    else if (key == "u_max") scalar(s.params.u_max, &have_u);
    else if (key == "c_d") scalar(s.params.c_d, &have_c);
    else if (key == "v_start") scalar(s.v_start, nullptr);
    else if (key == "v_end") scalar(s.v_end, nullptr);
    else if (key == "obstacle") {
      if (tok.size() < 7 || (tok.size() - 1) % 2 != 0)
        bad(n, "obstacle: expected an even number (>= 6) of coordinates, got " + std::to_string(tok.size() - 1));
      std::vector<Vec2> pts;
      for (std::size_t i = 1; i < tok.size(); i += 2)
        pts.push_back({parseNumber(tok[i], n, "obstacle"), parseNumber(tok[i + 1], n, "obstacle")});
      try {
        s.obstacles.push_back(Polygon::fromVertices(std::move(pts)));
      } catch (const PlanError& e) {
        bad(n, std::string("obstacle: ") + e.what());
      }
    } else {
      bad(n, "unknown field '" + key + "'");
    }
  }
  if (!have_inflation) bad(n, "missing field 'inflation'");
  if (!have_start) bad(n, "missing field 'start'");
  if (!have_goal) bad(n, "missing field 'goal'");
  if (!have_u) bad(n, "missing field 'u_max'");
  if (!have_c) bad(n, "missing field 'c_d'");
  if (!(s.inflation > 0.0)) throw PlanError(ErrorKind::InvalidScenario, "inflation: must be positive");
  s.params.validate();
  if (s.v_start < 0.0) throw PlanError(ErrorKind::InvalidScenario, "v_start: must be non-negative");
  if (s.v_end < 0.0) throw PlanError(ErrorKind::InvalidScenario, "v_end: must be non-negative");
  return s;
}

Scenario loadScenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PlanError(ErrorKind::InvalidScenario, "cannot open scenario file '" + path + "'");
  return parseScenario(f);
}

std::string serializeScenario(const Scenario& s) {
  std::ostringstream os;
  os << "inflation " << formatDouble(s.inflation) << "\n";
  os << "start " << formatDouble(s.start.x) << " " << formatDouble(s.start.y) << "\n";
  os << "goal " << formatDouble(s.goal.x) << " " << formatDouble(s.goal.y) << "\n";
  os << "u_max " << formatDouble(s.params.u_max) << "\n";
  os << "c_d " << formatDouble(s.params.c_d) << "\n";
  os << "v_start " << formatDouble(s.v_start) << "\n";
  os << "v_end " << formatDouble(s.v_end) << "\n";
  for (const auto& p : s.obstacles) {
    os << "obstacle";
    for (const auto& v : p.vertices()) os << " " << formatDouble(v.x) << " " << formatDouble(v.y);
    os << "\n";
  }
  return os.str();
}

std::string scenarioHash(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serializeScenario(s)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void writeTrajectory(std::ostream& out, const TrajectoryFile& t) {
  out << "# tgplan trajectory v1\n";
  out << "# units: t [s], x y [m], vx vy [m/s], ux uy [m/s^2], gamma [m]\n";
  out << "scenario_hash " << t.scenario_hash << "\n";
  out << "u_max " << formatDouble(t.params.u_max) << "\n";
  out << "c_d " << formatDouble(t.params.c_d) << "\n";
  out << "inflation " << formatDouble(t.inflation) << "\n";
  out << "v_start " << formatDouble(t.v_start) << "\n";
  out << "v_end " << formatDouble(t.v_end) << "\n";
  out << "total_time " << formatDouble(t.total_time) << "\n";
  out << "path_length " << formatDouble(t.path_length) << "\n";
  out << "dt " << formatDouble(t.dt) << "\n";
  out << "filtered " << (t.filtered ? 1 : 0) << "\n";
  out << "rows " << t.rows.size() << "\n";
  out << "columns t x y vx vy ux uy gamma\n";
  for (const auto& r : t.rows) {
    out << formatDouble(r.t) << ' ' << formatDouble(r.r.x) << ' ' << formatDouble(r.r.y) << ' '
        << formatDouble(r.v.x) << ' ' << formatDouble(r.v.y) << ' ' << formatDouble(r.u.x) << ' '
        << formatDouble(r.u.y) << ' ' << formatDouble(r.gamma) << '\n';
  }
}

TrajectoryFile readTrajectory(std::istream& in) {
  TrajectoryFile t;
  std::string text;
  std::size_t n = 0;
  std::size_t expected_rows = 0;
  bool in_rows = false, have_hash = false;
  while (std::getline(in, text)) {
    ++n;
    const auto tok = tokens(text);
    if (tok.empty()) continue;
    if (in_rows) {
      if (tok.size() != 8) bad(n, "row: expected 8 columns, got " + std::to_string(tok.size()));
      double v[8];
      for (int i = 0; i < 8; ++i) v[i] = parseNumber(tok[static_cast<std::size_t>(i)], n, "row");
      t.rows.push_back({v[0], {v[1], v[2]}, {v[3], v[4]}, {v[5], v[6]}, v[7]});
      continue;
    }
    const std::string& key = tok[0];
    if (key == "columns") {
      if (text.find("t x y vx vy ux uy gamma") == std::string::npos) bad(n, "columns: unexpected layout");
      in_rows = true;
      continue;
    }
    if (tok.size() != 2) bad(n, key + ": expected 1 value");
    if (key == "scenario_hash") {
      t.scenario_hash = tok[1];
      have_hash = true;
    } else if (key == "rows") {
      expected_rows = static_cast<std::size_t>(parseNumber(tok[1], n, key));
    } else if (key == "filtered") {
      t.filtered = parseNumber(tok[1], n, key) != 0.0;
    } else {
      const double v = parseNumber(tok[1], n, key);
      if (key == "u_max") t.params.u_max = v;
      else if (key == "c_d") t.params.c_d = v;
      else if (key == "inflation") t.inflation = v;
      else if (key == "v_start") t.v_start = v;
      else if (key == "v_end") t.v_end = v;
      else if (key == "total_time") t.total_time = v;
      else if (key == "path_length") t.path_length = v;
      else if (key == "dt") t.dt = v;
      else bad(n, "unknown field '" + key + "'");
    }
  }
  if (!have_hash) bad(n, "missing field 'scenario_hash'");
  if (!in_rows) bad(n, "missing 'columns' header");
  if (t.rows.size() != expected_rows)
    bad(n, "expected " + std::to_string(expected_rows) + " rows, found " + std::to_string(t.rows.size()));
  return t;
}

}  // namespace tgplan
