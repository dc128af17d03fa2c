#include "tgplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tgplan/error.hpp"

namespace tgplan {
namespace {

constexpr double kCollinearSine = 1e-9;

double signedArea(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

[[noreturn]] void reject(const std::string& why) { throw PlanError(ErrorKind::InvalidPolygon, why); }

}  // namespace

Polygon Polygon::fromVertices(std::vector<Vec2> v) {
  if (v.size() < 3) reject("polygon needs at least 3 vertices, got " + std::to_string(v.size()));
  for (const auto& p : v)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) reject("non-finite vertex coordinate");

  double scale = 0.0;
  for (const auto& p : v) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  const double dup_tol = 1e-12 * std::max(1.0, scale);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (distance(v[i], v[j]) <= dup_tol) {
        std::ostringstream os;
        os << "repeated vertex " << v[i] << " at indices " << i << " and " << j;
        reject(os.str());
      }

  if (signedArea(v) < 0.0) std::reverse(v.begin() + 1, v.end());

  // Merge vertices whose turning angle vanishes.
  bool merged = true;
  while (merged && v.size() >= 3) {
    merged = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 a = v[(i + v.size() - 1) % v.size()];
      const Vec2 b = v[i];
      const Vec2 c = v[(i + 1) % v.size()];
      const Vec2 e0 = (b - a).normalized();
      const Vec2 e1 = (c - b).normalized();
      if (std::abs(cross(e0, e1)) <= kCollinearSine && dot(e0, e1) > 0.0) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        merged = true;
        break;
      }
    }
  }
  if (v.size() < 3) reject("polygon is degenerate after merging collinear vertices");

  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 e0 = (v[i] - v[(i + v.size() - 1) % v.size()]).normalized();
    const Vec2 e1 = (v[(i + 1) % v.size()] - v[i]).normalized();
    if (cross(e0, e1) <= kCollinearSine) {
      std::ostringstream os;
      os << "polygon is not strictly convex at vertex " << i << ' ' << v[i];
      reject(os.str());
    }
  }
  // A star-shaped vertex sequence can pass the local test while winding twice.
  double turning = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 e0 = v[i] - v[(i + v.size() - 1) % v.size()];
    const Vec2 e1 = v[(i + 1) % v.size()] - v[i];
    turning += std::atan2(cross(e0, e1), dot(e0, e1));
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) reject("polygon winds more than once");
  return Polygon(std::move(v));
}

double Polygon::perimeter() const {
  double p = 0.0;
  for (std::size_t i = 0; i < size(); ++i) p += distance(vertex(i), vertex(i + 1));
  return p;
}

double Polygon::area() const { return signedArea(vertices_); }

Vec2 Polygon::centroid() const {
  // Shift to the first vertex for conditioning.
  const Vec2 o = vertices_.front();
  double a = 0.0;
  Vec2 c;
  for (std::size_t i = 0; i < size(); ++i) {
    const Vec2 p = vertex(i) - o;
    const Vec2 q = vertex(i + 1) - o;
    const double w = cross(p, q);
    a += w;
    c += (p + q) * w;
  }
  return o + c / (3.0 * a);
}

double Polygon::signedDistance(const Vec2& p) const {
  bool inside = true;
  double nearest_line = std::numeric_limits<double>::infinity();
  double nearest_edge = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) {
    const Vec2 a = vertex(i);
    const Vec2 b = vertex(i + 1);
    const Vec2 e = b - a;
    const double len = e.norm();
    const double side = cross(e, p - a) / len;  // > 0 on the interior side
    if (side < 0.0) inside = false;
    nearest_line = std::min(nearest_line, side);
    const double s = std::clamp(dot(p - a, e) / (len * len), 0.0, 1.0);
    nearest_edge = std::min(nearest_edge, distance(p, a + e * s));
  }
  return inside ? -nearest_line : nearest_edge;
}

InflatedObstacle::InflatedObstacle(Polygon source, double radius)
    : source_(std::move(source)), radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw PlanError(ErrorKind::InvalidPolygon, "inflation radius must be positive");
  const std::size_t m = source_.size();
  pieces_.reserve(2 * m);
  double gamma = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 prev = source_.vertex(i + m - 1);
    const Vec2 here = source_.vertex(i);
    const Vec2 next = source_.vertex(i + 1);
    const Vec2 e_in = here - prev;
    const Vec2 e_out = next - here;
    const Vec2 n_in = Vec2{e_in.y, -e_in.x}.normalized();
    const Vec2 n_out = Vec2{e_out.y, -e_out.x}.normalized();
    const double start = std::atan2(n_in.y, n_in.x);
    const double sweep = std::atan2(cross(e_in, e_out), dot(e_in, e_out));

    ArcPiece arc{here, radius_, start, start + sweep};
    pieces_.push_back({arc, radius_ * sweep, gamma, i});
    gamma += radius_ * sweep;

    SegmentPiece seg{here + n_out * radius_, next + n_out * radius_};
    const double len = e_out.norm();
    pieces_.push_back({seg, len, gamma, i});
    gamma += len;
  }
  perimeter_ = gamma;
}

std::vector<double> InflatedObstacle::breakpoints() const {
  std::vector<double> b;
  b.reserve(pieces_.size());
  for (const auto& p : pieces_) b.push_back(p.gamma_start);
  return b;
}

std::vector<double> InflatedObstacle::junctionAngles() const {
  std::vector<double> a;
  for (const auto& p : pieces_)
    if (p.isArc()) {
      a.push_back(p.arc().start_angle);
      a.push_back(p.arc().end_angle);
    }
  return a;
}

double InflatedObstacle::wrap(double gamma) const {
  double g = std::fmod(gamma, perimeter_);
  if (g < 0.0) g += perimeter_;
  if (g >= perimeter_) g = 0.0;
  return g;
}

std::size_t InflatedObstacle::pieceIndex(double gamma) const {
  const double g = wrap(gamma);
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), g,
                             [](double value, const BoundaryPiece& p) { return value < p.gamma_start; });
  return static_cast<std::size_t>(std::distance(pieces_.begin(), it)) - 1;
}

BoundaryJet InflatedObstacle::jet(double gamma) const {
  const double g = wrap(gamma);
  const BoundaryPiece& piece = pieces_[pieceIndex(g)];
  const double local = g - piece.gamma_start;
  if (piece.isArc()) {
    const ArcPiece& a = piece.arc();
    const double psi = a.start_angle + local / a.radius;
    const double c = std::cos(psi), s = std::sin(psi);
    return {a.center + Vec2{c, s} * a.radius, {-s, c}, Vec2{-c, -s} / a.radius,
            Vec2{s, -c} / (a.radius * a.radius)};
  }
  const SegmentPiece& s = piece.segment();
  const Vec2 dir = (s.end - s.start) / piece.length;
  return {s.start + dir * local, dir, {}, {}};
}

Vec2 InflatedObstacle::point(double gamma) const {
  const double g = wrap(gamma);
  const BoundaryPiece& piece = pieces_[pieceIndex(g)];
  const double local = g - piece.gamma_start;
  if (piece.isArc()) {
    const ArcPiece& a = piece.arc();
    return a.center + unitFromAngle(a.start_angle + local / a.radius) * a.radius;
  }
  const SegmentPiece& s = piece.segment();
  const double alpha = local / piece.length;
  return s.start + (s.end - s.start) * alpha;
}

Vec2 InflatedObstacle::tangent(double gamma) const { return jet(gamma).d1; }

InflatedObstacle inflatePolygon(const Polygon& polygon, double radius) { return {polygon, radius}; }
Vec2 boundaryPoint(const InflatedObstacle& obstacle, double gamma) { return obstacle.point(gamma); }
Vec2 boundaryTangent(const InflatedObstacle& obstacle, double gamma) { return obstacle.tangent(gamma); }

double minInradius(const InflatedObstacle& obstacle) {
  // The centroid is interior, so the nearest inflated-boundary point lies
  // along the normal of the nearest edge line.
  return -obstacle.source().signedDistance(obstacle.source().centroid()) + obstacle.radius();
}

}  // namespace tgplan
