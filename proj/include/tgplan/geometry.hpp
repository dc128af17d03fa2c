#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "tgplan/vec2.hpp"

namespace tgplan {

/// Strictly convex polygon with counterclockwise vertices.
///
/// Construct through `Polygon::fromVertices`, which normalizes orientation,
/// merges collinear vertices and rejects degenerate input.
class Polygon {
 public:
  static Polygon fromVertices(std::vector<Vec2> vertices);

  std::span<const Vec2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Vec2& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

  double perimeter() const;
  double area() const;
  Vec2 centroid() const;
  /// Negative inside (minus the distance to the nearest edge), positive outside.
  double signedDistance(const Vec2& p) const;

 private:
  explicit Polygon(std::vector<Vec2> v) : vertices_(std::move(v)) {}
  std::vector<Vec2> vertices_;
};

struct ArcPiece {
  Vec2 center;
  double radius = 0.0;
  double start_angle = 0.0;  // radians, counterclockwise sweep to end_angle
  double end_angle = 0.0;
};

struct SegmentPiece {
  Vec2 start;
  Vec2 end;
};

struct BoundaryPiece {
  std::variant<ArcPiece, SegmentPiece> shape;
  double length = 0.0;
  double gamma_start = 0.0;  // arc-length where the piece begins
  std::size_t vertex = 0;    // source vertex (arcs) or edge start vertex (segments)

  bool isArc() const { return std::holds_alternative<ArcPiece>(shape); }
  const ArcPiece& arc() const { return std::get<ArcPiece>(shape); }
  const SegmentPiece& segment() const { return std::get<SegmentPiece>(shape); }
  double gammaEnd() const { return gamma_start + length; }
};

/// Position and the first three arc-length derivatives of a boundary point.
struct BoundaryJet {
  Vec2 p, d1, d2, d3;
};

/// Minkowski sum of a convex polygon with a disk, as a closed C1 curve.
///
/// The boundary alternates Arc(vertex 0), Segment(0->1), Arc(vertex 1), ...
/// and is parameterized by arc length gamma in [0, perimeter), counterclockwise.
/// Junction values of gamma belong to the following piece.
class InflatedObstacle {
 public:
  InflatedObstacle(Polygon source, double radius);

  const Polygon& source() const { return source_; }
  double radius() const { return radius_; }
  double perimeter() const { return perimeter_; }
  std::span<const BoundaryPiece> pieces() const { return pieces_; }
  /// gamma values at the piece junctions, starting with 0.
  std::vector<double> breakpoints() const;
  /// Outward normal angles at the arc ends (two per vertex).
  std::vector<double> junctionAngles() const;

  double wrap(double gamma) const;
  std::size_t pieceIndex(double gamma) const;
  Vec2 point(double gamma) const;
  Vec2 tangent(double gamma) const;
  BoundaryJet jet(double gamma) const;

  /// Signed distance to the inflated boundary; negative in the interior.
  double signedDistance(const Vec2& p) const { return source_.signedDistance(p) - radius_; }

 private:
  Polygon source_;
  double radius_;
  double perimeter_ = 0.0;
  std::vector<BoundaryPiece> pieces_;
};

InflatedObstacle inflatePolygon(const Polygon& polygon, double radius);
Vec2 boundaryPoint(const InflatedObstacle& obstacle, double gamma);
Vec2 boundaryTangent(const InflatedObstacle& obstacle, double gamma);
/// Minimum distance from the source polygon's centroid to the inflated boundary.
double minInradius(const InflatedObstacle& obstacle);

}  // namespace tgplan
