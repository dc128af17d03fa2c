#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tgplan/geometry.hpp"

namespace tgplan {

/// Common-tangent solution between two boundaries.
struct TangencyPair {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  Vec2 p1, p2;
  double residual = 0.0;  // slope objective at the solution
};

/// Endpoint of a tangent edge: a boundary anchor or a free terminal point.
struct Anchor {
  std::optional<std::size_t> obstacle;  // empty for free points
  double gamma = 0.0;
  Vec2 point;
};

enum class TangentKind { External, Internal, Terminal };

struct TangentEdge {
  Anchor from;
  Anchor to;
  double length = 0.0;
  TangentKind kind = TangentKind::External;

  Vec2 direction() const { return (to.point - from.point) / length; }
};

/// Slope-based tangency objective and its derivatives.
///
/// Uses slopes y/x of the chord and of the boundary tangents, so these are
/// undefined for vertical directions; they throw `ErrorKind::VerticalSlope`
/// there. The solver itself works with cross-product residuals and only uses
/// these for certification.
double tangencyObjective(const InflatedObstacle& obs1, const InflatedObstacle& obs2, double gamma1,
                         double gamma2);
std::array<double, 2> tangencyGradient(const InflatedObstacle& obs1, const InflatedObstacle& obs2,
                                       double gamma1, double gamma2);

struct TangencyHessian {
  double f11 = 0.0, f12 = 0.0, f22 = 0.0;
  double determinant() const { return f11 * f22 - f12 * f12; }
};
/// Second partials derived from the definition of the objective.
TangencyHessian tangencyHessian(const InflatedObstacle& obs1, const InflatedObstacle& obs2, double gamma1,
                                double gamma2);
/// Closed-form determinant certificate 4 (dm/dgamma1)^2 (dm/dgamma2)^2, with m the chord slope.
double rootHessianCertificate(const InflatedObstacle& obs1, const InflatedObstacle& obs2, double gamma1,
                              double gamma2);

/// Cross-product residuals (chord x t1, chord x t2).
std::array<double, 2> tangencyResiduals(const InflatedObstacle& obs1, const InflatedObstacle& obs2,
                                        double gamma1, double gamma2);

/// Damped Newton solve of the cross-product system from one seed.
std::optional<TangencyPair> solveTangency(const InflatedObstacle& obs1, const InflatedObstacle& obs2,
                                          double seed1, double seed2);

/// Distance between the closures of two inflated obstacles (0 when they touch or overlap).
double obstacleGap(const InflatedObstacle& obs1, const InflatedObstacle& obs2);

/// All four common tangents of two disjoint inflated obstacles.
std::vector<TangentEdge> commonTangents(const InflatedObstacle& obs1, const InflatedObstacle& obs2,
                                        std::size_t id1 = 0, std::size_t id2 = 1);

/// The two tangents from a free point to an obstacle, directed point -> boundary.
std::vector<TangentEdge> pointTangents(const Vec2& point, const InflatedObstacle& obs, std::size_t id = 0);

/// True iff the open segment enters the interior of any obstacle (touching is allowed).
bool segmentCollides(const Vec2& a, const Vec2& b, std::span<const InflatedObstacle> obstacles);

/// Distance between closed segments [a0,a1] and [b0,b1].
double segmentDistance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

}  // namespace tgplan
