#pragma once

// Seeded random worlds for property tests and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "tgplan/geometry.hpp"
#include "tgplan/scenario.hpp"

namespace tgplan::worlds {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniformInt(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Strictly convex polygon with n vertices: jittered angles on an ellipse,
/// rotated and translated. Affine images of concyclic points stay strictly convex.
inline Polygon randomConvexPolygon(Rng& rng, Vec2 center, double radius, int n) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double phase = uniform(rng, 0.0, two_pi);
  std::vector<double> angles;
  for (int i = 0; i < n; ++i) angles.push_back(phase + two_pi * (i + uniform(rng, -0.3, 0.3)) / n);
  std::sort(angles.begin(), angles.end());
  const double sx = radius, sy = radius * uniform(rng, 0.5, 1.0);
  const double rot = uniform(rng, 0.0, two_pi);
  const double c = std::cos(rot), s = std::sin(rot);
  std::vector<Vec2> pts;
  for (double a : angles) {
    const Vec2 e{sx * std::cos(a), sy * std::sin(a)};
    pts.push_back(center + Vec2{c * e.x - s * e.y, s * e.x + c * e.y});
  }
  return Polygon::fromVertices(std::move(pts));
}

/// Maximum distance from `center` to a vertex.
inline double circumradius(const Polygon& p, Vec2 center) {
  double r = 0.0;
  for (const auto& v : p.vertices()) r = std::max(r, distance(v, center));
  return r;
}

struct WorldConfig {
  int min_obstacles = 1;
  int max_obstacles = 6;
  int min_vertices = 3;
  int max_vertices = 8;
  double min_size = 0.4;
  double max_size = 1.6;
  double min_inflation = 0.1;
  double max_inflation = 0.6;
  double extent = 10.0;   // obstacles are placed in [0, extent]^2
  double spread = 1.0;    // obstacle box height as a multiple of extent, centred on [0, extent]
  double gap = 0.1;       // minimum clearance between inflated bounding disks
  double u_max = 1.0;
  double c_d = 0.1;
};

/// Random scenario with pairwise disjoint inflated obstacles and start/goal
/// outside all of them, on opposite sides of the box.
inline Scenario randomScenario(Rng& rng, const WorldConfig& cfg = {}) {
  Scenario s;
  s.inflation = uniform(rng, cfg.min_inflation, cfg.max_inflation);
  s.params = {cfg.u_max, cfg.c_d};
  const int want = uniformInt(rng, cfg.min_obstacles, cfg.max_obstacles);
  std::vector<std::pair<Vec2, double>> disks;
  for (int attempt = 0; attempt < 400 && static_cast<int>(s.obstacles.size()) < want; ++attempt) {
    const double pad = 0.5 * (cfg.spread - 1.0) * cfg.extent;
    const Vec2 c{uniform(rng, 0.0, cfg.extent), uniform(rng, -pad, cfg.extent + pad)};
    const double size = uniform(rng, cfg.min_size, cfg.max_size);
    const Polygon p = randomConvexPolygon(rng, c, size, uniformInt(rng, cfg.min_vertices, cfg.max_vertices));
    const double r = circumradius(p, c) + s.inflation;
    bool ok = true;
    for (const auto& [dc, dr] : disks) ok = ok && distance(c, dc) > r + dr + cfg.gap;
    if (!ok) continue;
    disks.emplace_back(c, r);
    s.obstacles.push_back(p);
  }
  auto freePoint = [&](double x_lo, double x_hi) {
    for (;;) {
      const Vec2 q{uniform(rng, x_lo, x_hi), uniform(rng, -1.0, cfg.extent + 1.0)};
      bool ok = true;
      for (const auto& [dc, dr] : disks) ok = ok && distance(q, dc) > dr + cfg.gap;
      if (ok) return q;
    }
  };
  s.start = freePoint(-1.5, 1.0);
  s.goal = freePoint(cfg.extent - 1.0, cfg.extent + 1.5);
  return s;
}

/// Two disjoint random convex polygons and an inflation radius.
struct PolygonPair {
  Polygon a;
  Polygon b;
  double inflation;
};

inline PolygonPair randomPair(Rng& rng, int min_vertices = 3, int max_vertices = 8, double min_inflation = 0.1,
                              double max_inflation = 1.0) {
  const double inflation = uniform(rng, min_inflation, max_inflation);
  const Vec2 ca{0.0, 0.0};
  const Polygon a = randomConvexPolygon(rng, ca, uniform(rng, 0.3, 2.0), uniformInt(rng, min_vertices, max_vertices));
  const double ra = circumradius(a, ca) + inflation;
  const double size_b = uniform(rng, 0.3, 2.0);
  const double dir = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  // Place b so the bounding disks are separated by a random gap.
  const double gap = uniform(rng, 0.05, 6.0);
  const Vec2 cb = unitFromAngle(dir) * (ra + size_b + inflation + gap);
  const Polygon b = randomConvexPolygon(rng, cb, size_b, uniformInt(rng, min_vertices, max_vertices));
  return {a, b, inflation};
}

/// Regular n-gon with the given circumradius, one vertex at angle `phase`.
inline Polygon regularPolygon(Vec2 center, double circumradius, int n, double phase = 0.0) {
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i) pts.push_back(center + unitFromAngle(phase + 2.0 * std::numbers::pi * i / n) * circumradius);
  return Polygon::fromVertices(std::move(pts));
}

}  // namespace tgplan::worlds
