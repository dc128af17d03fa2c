#pragma once

// Shared geometric fixtures and certificate helpers.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "support/worlds.hpp"
#include "tgplan/geometry.hpp"
#include "tgplan/tangents.hpp"

namespace tgplan::fixtures {

/// Regular n-gon of circumradius r0 (one vertex at +y) inflated so the
/// boundary approximates the circle of radius `radius` about `center`.
inline InflatedObstacle nearCircle(Vec2 center, double radius, double r0 = 1e-7, int n = 64) {
  return inflatePolygon(worlds::regularPolygon(center, r0, n, std::numbers::pi / 2), radius - r0);
}

/// Boundary parameter of the arc point with outward normal angle psi.
inline std::optional<double> gammaAtNormal(const InflatedObstacle& o, double psi) {
  for (const auto& piece : o.pieces()) {
    if (!piece.isArc()) continue;
    const auto& a = piece.arc();
    double off = std::remainder(psi - a.start_angle, 2.0 * std::numbers::pi);
    if (off < 0.0) off += 2.0 * std::numbers::pi;
    if (off <= a.end_angle - a.start_angle) return piece.gamma_start + off * a.radius;
  }
  return std::nullopt;
}

/// Same obstacle rotated about the origin. Vertex order and hence the
/// boundary parameterization are preserved.
inline InflatedObstacle rotated(const InflatedObstacle& o, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  std::vector<Vec2> pts;
  for (const auto& v : o.source().vertices()) pts.push_back({c * v.x - s * v.y, s * v.x + c * v.y});
  return inflatePolygon(Polygon::fromVertices(std::move(pts)), o.radius());
}

struct Certificate {
  double f = 0.0;
  double grad = 0.0;         // infinity norm
  double det_formula = 0.0;  // 4 (dm/dgamma1)^2 (dm/dgamma2)^2
  double det_hessian = 0.0;  // from the second partials
};

/// Slope objective certificate at a tangency, evaluated in the frame where
/// the chord is horizontal so that no slope is vertical.
inline Certificate chordFrameCertificate(const InflatedObstacle& o1, const InflatedObstacle& o2, double g1,
                                         double g2) {
  const Vec2 d = o2.point(g2) - o1.point(g1);
  const double angle = -std::atan2(d.y, d.x);
  const auto r1 = rotated(o1, angle), r2 = rotated(o2, angle);
  Certificate c;
  c.f = tangencyObjective(r1, r2, g1, g2);
  const auto g = tangencyGradient(r1, r2, g1, g2);
  c.grad = std::max(std::abs(g[0]), std::abs(g[1]));
  c.det_formula = rootHessianCertificate(r1, r2, g1, g2);
  c.det_hessian = tangencyHessian(r1, r2, g1, g2).determinant();
  return c;
}

}  // namespace tgplan::fixtures
