#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "tgplan/vec2.hpp"

namespace tgplan {

/// Traversal sense along an obstacle boundary.
enum class Sense { Ccw, Cw };

struct StraightSegment {
  Vec2 from;
  Vec2 to;
};

struct ArcSegment {
  std::size_t obstacle = 0;
  Vec2 center;
  double radius = 0.0;
  double start_angle = 0.0;  // polar angle of the entry point about center
  Sense sense = Sense::Ccw;
  double gamma_from = 0.0;   // boundary parameters on the obstacle
  double gamma_to = 0.0;
};

struct PathSegment {
  std::variant<StraightSegment, ArcSegment> shape;
  double length = 0.0;
  double offset = 0.0;  // path arc-length at the segment start

  bool isArc() const { return std::holds_alternative<ArcSegment>(shape); }
  const ArcSegment& arc() const { return std::get<ArcSegment>(shape); }
  const StraightSegment& straight() const { return std::get<StraightSegment>(shape); }

  /// Point, unit tangent, and curvature vector (d2 r / ds2) at local arc-length s.
  Vec2 pointAt(double s) const;
  Vec2 tangentAt(double s) const;
  Vec2 curvatureAt(double s) const;
};

/// C1 path of alternating straight and circular segments, parameterized by arc length.
class PlannedPath {
 public:
  PlannedPath() = default;
  /// Drops zero-length pieces, merges collinear straights and contiguous arcs,
  /// and recomputes offsets.
  explicit PlannedPath(std::vector<PathSegment> segments);

  std::span<const PathSegment> segments() const { return segments_; }
  double totalLength() const { return total_length_; }
  /// Segment boundary offsets, starting with 0 and ending with totalLength().
  std::vector<double> cumulativeBreaks() const;
  std::size_t straightCount() const;
  std::size_t arcCount() const;

  std::size_t segmentIndex(double gamma) const;
  Vec2 point(double gamma) const;
  /// Heading angle in [0, 2pi).
  double heading(double gamma) const;
  Vec2 tangent(double gamma) const;

  Vec2 startPoint() const;
  Vec2 endPoint() const;

 private:
  std::vector<PathSegment> segments_;
  double total_length_ = 0.0;
};

PathSegment makeStraight(const Vec2& from, const Vec2& to);

Vec2 pathPoint(const PlannedPath& path, double gamma);
double pathHeading(const PlannedPath& path, double gamma);

/// Number of connected components of the intersection of the two path traces.
/// Tangential contact counts; identical paths give 1.
int countPathIntersections(const PlannedPath& path1, const PlannedPath& path2);

}  // namespace tgplan
