#include "tgplan/tangents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tgplan/error.hpp"
#include "tgplan/log.hpp"

namespace tgplan {
namespace {

constexpr double kVerticalTol = 1e-12;
constexpr double kDedupTol = 1e-7;
constexpr int kMaxNewtonIterations = 50;

// Slope of y'/x' and its first two derivatives along the curve.
struct CurveSlope {
  double m = 0.0, dm = 0.0, ddm = 0.0;
};

CurveSlope curveSlope(const BoundaryJet& j) {
  const double x1 = j.d1.x, y1 = j.d1.y;
  if (std::abs(x1) <= kVerticalTol) throw PlanError(ErrorKind::VerticalSlope, "boundary tangent is vertical");
  const double n = j.d2.y * x1 - y1 * j.d2.x;
  const double dn = j.d3.y * x1 - y1 * j.d3.x;
  return {y1 / x1, n / (x1 * x1), (dn * x1 - 2.0 * n * j.d2.x) / (x1 * x1 * x1)};
}

// Chord slope m = U/V with U = y2 - y1, V = x2 - x1, and partials in (gamma1, gamma2).
struct ChordSlope {
  double m = 0.0, m1 = 0.0, m2 = 0.0, m11 = 0.0, m22 = 0.0, m12 = 0.0;
};

ChordSlope chordSlope(const BoundaryJet& a, const BoundaryJet& b) {
  const Vec2 d = b.p - a.p;
  if (std::abs(d.x) <= kVerticalTol * std::max(1.0, d.norm()))
    throw PlanError(ErrorKind::VerticalSlope, "chord is vertical");
  const double u = d.y, v = d.x;
  const double u_a[2] = {-a.d1.y, b.d1.y};
  const double v_a[2] = {-a.d1.x, b.d1.x};
  const double u_aa[2] = {-a.d2.y, b.d2.y};
  const double v_aa[2] = {-a.d2.x, b.d2.x};
  auto first = [&](int i) { return (u_a[i] * v - u * v_a[i]) / (v * v); };
  auto second = [&](int i, int k) {
    const double u_ik = (i == k) ? u_aa[i] : 0.0;
    const double v_ik = (i == k) ? v_aa[i] : 0.0;
    return (u_ik * v + u_a[i] * v_a[k] - u_a[k] * v_a[i] - u * v_ik) / (v * v) -
           2.0 * (u_a[i] * v - u * v_a[i]) * v_a[k] / (v * v * v);
  };
  return {u / v, first(0), first(1), second(0, 0), second(1, 1), second(0, 1)};
}

struct SlopeTerms {
  ChordSlope c;
  CurveSlope s1, s2;
};

SlopeTerms slopeTerms(const InflatedObstacle& obs1, const InflatedObstacle& obs2, double g1, double g2) {
  const BoundaryJet a = obs1.jet(g1);
  const BoundaryJet b = obs2.jet(g2);
  return {chordSlope(a, b), curveSlope(a), curveSlope(b)};
}

double cyclicGap(double a, double b, double period) {
  const double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

// Moves an anchor whose tangent line runs along a flat edge to the edge end
// nearer `other`, so that all anchors sit on arcs.
double canonicalAnchor(const InflatedObstacle& obs, double gamma, const Vec2& chord_dir, const Vec2& other) {
  const auto pieces = obs.pieces();
  const std::size_t n = pieces.size();
  const std::size_t idx = obs.pieceIndex(gamma);
  const double local = obs.wrap(gamma) - pieces[idx].gamma_start;
  std::optional<std::size_t> seg;
  if (!pieces[idx].isArc()) {
    seg = idx;
  } else if (local <= 1e-9) {
    seg = (idx + n - 1) % n;
  } else if (pieces[idx].length - local <= 1e-9) {
    seg = (idx + 1) % n;
  }
  if (!seg) return obs.wrap(gamma);
  const BoundaryPiece& s = pieces[*seg];
  const Vec2 dir = (s.segment().end - s.segment().start) / s.length;
  if (std::abs(cross(chord_dir, dir)) > 1e-9) return obs.wrap(gamma);
  const bool start_nearer = distance(s.segment().start, other) <= distance(s.segment().end, other);
  return obs.wrap(start_nearer ? s.gamma_start : s.gammaEnd());
}

// Normal angles (on each circle) of the four common tangents of two equal-radius circles.
std::vector<std::pair<double, double>> circleTangentNormals(const ArcPiece& a, const ArcPiece& b) {
  const Vec2 d = b.center - a.center;
  const double dist = d.norm();
  const double phi = std::atan2(d.y, d.x);
  std::vector<std::pair<double, double>> out;
  const double half_pi = 0.5 * std::numbers::pi;
  out.emplace_back(phi + half_pi, phi + half_pi);
  out.emplace_back(phi - half_pi, phi - half_pi);
  if (dist > a.radius + b.radius) {
    const double off = std::acos((a.radius + b.radius) / dist);
    out.emplace_back(phi + off, phi + off + std::numbers::pi);
    out.emplace_back(phi - off, phi - off + std::numbers::pi);
  }
  return out;
}

std::optional<double> gammaOnArc(const BoundaryPiece& piece, double psi) {
  const ArcPiece& arc = piece.arc();
  double off = std::remainder(psi - arc.start_angle, 2.0 * std::numbers::pi);
  if (off < 0.0 && off > -1e-12) off = 0.0;
  if (off < 0.0) off += 2.0 * std::numbers::pi;
  if (off > arc.end_angle - arc.start_angle + 1e-12) return std::nullopt;
  return piece.gamma_start + std::min(off * arc.radius, piece.length);
}

double polygonGap(const Polygon& a, const Polygon& b) {
  for (const auto& v : a.vertices())
    if (b.signedDistance(v) <= 0.0) return 0.0;
  for (const auto& v : b.vertices())
    if (a.signedDistance(v) <= 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      best = std::min(best, segmentDistance(a.vertex(i), a.vertex(i + 1), b.vertex(j), b.vertex(j + 1)));
  return best;
}

double pointSegmentDistance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  const double len2 = e.squaredNorm();
  const double s = len2 > 0.0 ? std::clamp(dot(p - a, e) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + e * s);
}

}  // namespace

double segmentDistance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  const Vec2 r = a1 - a0, s = b1 - b0;
  const double denom = cross(r, s);
  if (denom != 0.0) {
    const double t = cross(b0 - a0, s) / denom;
    const double u = cross(b0 - a0, r) / denom;
    if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) return 0.0;
  }
  return std::min({pointSegmentDistance(a0, b0, b1), pointSegmentDistance(a1, b0, b1),
                   pointSegmentDistance(b0, a0, a1), pointSegmentDistance(b1, a0, a1)});
}

double tangencyObjective(const InflatedObstacle& obs1, const InflatedObstacle& obs2, double gamma1,
                         double gamma2) {
  const SlopeTerms t = slopeTerms(obs1, obs2, gamma1, gamma2);
  const double e1 = t.c.m - t.s1.m, e2 = t.c.m - t.s2.m;
  return e1 * e1 + e2 * e2;
}

std::array<double, 2> tangencyGradient(const InflatedObstacle& obs1, const InflatedObstacle& obs2,
                                       double gamma1, double gamma2) {
  const SlopeTerms t = slopeTerms(obs1, obs2, gamma1, gamma2);
  const double e1 = t.c.m - t.s1.m, e2 = t.c.m - t.s2.m;
  return {2.0 * (e1 * (t.c.m1 - t.s1.dm) + e2 * t.c.m1), 2.0 * (e1 * t.c.m2 + e2 * (t.c.m2 - t.s2.dm))};
}

TangencyHessian tangencyHessian(const InflatedObstacle& obs1, const InflatedObstacle& obs2, double gamma1,
                                double gamma2) {
  const SlopeTerms t = slopeTerms(obs1, obs2, gamma1, gamma2);
  const ChordSlope& c = t.c;
  const double e1 = c.m - t.s1.m, e2 = c.m - t.s2.m;
  const double a = c.m1 - t.s1.dm;  // d e1 / d gamma1
  const double d = c.m2 - t.s2.dm;  // d e2 / d gamma2
  TangencyHessian h;
  h.f11 = 2.0 * (a * a + e1 * (c.m11 - t.s1.ddm) + c.m1 * c.m1 + e2 * c.m11);
  h.f22 = 2.0 * (c.m2 * c.m2 + e1 * c.m22 + d * d + e2 * (c.m22 - t.s2.ddm));
  h.f12 = 2.0 * (a * c.m2 + c.m1 * d + (e1 + e2) * c.m12);
  return h;
}

double rootHessianCertificate(const InflatedObstacle& obs1, const InflatedObstacle& obs2, double gamma1,
                              double gamma2) {
  const SlopeTerms t = slopeTerms(obs1, obs2, gamma1, gamma2);
  return 4.0 * t.c.m1 * t.c.m1 * t.c.m2 * t.c.m2;
}

std::array<double, 2> tangencyResiduals(const InflatedObstacle& obs1, const InflatedObstacle& obs2,
                                        double gamma1, double gamma2) {
  const Vec2 p1 = obs1.point(gamma1), p2 = obs2.point(gamma2);
  const Vec2 d = p2 - p1;
  return {cross(d, obs1.tangent(gamma1)), cross(d, obs2.tangent(gamma2))};
}

std::optional<TangencyPair> solveTangency(const InflatedObstacle& obs1, const InflatedObstacle& obs2,
                                          double seed1, double seed2) {
  double g1 = seed1, g2 = seed2;
  const double max_step = 0.25 * std::min(obs1.perimeter(), obs2.perimeter());
  auto residual = [&](double a, double b) {
    const auto r = tangencyResiduals(obs1, obs2, a, b);
    return std::max(std::abs(r[0]), std::abs(r[1]));
  };
  double scale = std::max(1.0, distance(obs1.point(g1), obs2.point(g2)));
  double res = residual(g1, g2);
  bool converged = res < 1e-12 * scale;
  for (int it = 0; it < kMaxNewtonIterations && !converged; ++it) {
    const BoundaryJet a = obs1.jet(g1), b = obs2.jet(g2);
    const Vec2 d = b.p - a.p;
    const double r1 = cross(d, a.d1), r2 = cross(d, b.d1);
    const double j11 = cross(d, a.d2), j12 = cross(b.d1, a.d1), j22 = cross(d, b.d2);
    const double det = j11 * j22 - j12 * j12;
    double s1, s2;
    if (std::abs(det) > 1e-14 * std::max(1.0, d.squaredNorm())) {
      s1 = -(j22 * r1 - j12 * r2) / det;
      s2 = -(-j12 * r1 + j11 * r2) / det;
    } else {
      // Singular Jacobian (flat pieces): descend on 0.5 |r|^2.
      s1 = -(j11 * r1 + j12 * r2);
      s2 = -(j12 * r1 + j22 * r2);
      const double n = std::hypot(s1, s2);
      if (n == 0.0) break;
      s1 *= 0.1 * max_step / n;
      s2 *= 0.1 * max_step / n;
    }
    const double len = std::hypot(s1, s2);
    if (len > max_step) {
      s1 *= max_step / len;
      s2 *= max_step / len;
    }
    double step = 1.0;
    bool improved = false;
    for (int h = 0; h < 40; ++h, step *= 0.5) {
      const double r_try = residual(g1 + step * s1, g2 + step * s2);
      if (r_try < res) {
        g1 = obs1.wrap(g1 + step * s1);
        g2 = obs2.wrap(g2 + step * s2);
        res = r_try;
        improved = true;
        break;
      }
    }
    scale = std::max(1.0, distance(obs1.point(g1), obs2.point(g2)));
    converged = res < 1e-12 * scale;
    if (!improved) break;
  }
  if (!converged) return std::nullopt;

  const Vec2 p1 = obs1.point(g1), p2 = obs2.point(g2);
  const Vec2 dir = (p2 - p1).normalized();
  g1 = canonicalAnchor(obs1, g1, dir, p2);
  g2 = canonicalAnchor(obs2, g2, dir, obs1.point(g1));
  TangencyPair pair{g1, g2, obs1.point(g1), obs2.point(g2), 0.0};
  // Slope objective evaluated in the chord-aligned frame, where it is always defined.
  const Vec2 u = (pair.p2 - pair.p1).normalized();
  const Vec2 t1 = obs1.tangent(g1), t2 = obs2.tangent(g2);
  const double tan1 = cross(u, t1) / dot(u, t1), tan2 = cross(u, t2) / dot(u, t2);
  pair.residual = tan1 * tan1 + tan2 * tan2;
  if (!(pair.residual <= 1e-12)) return std::nullopt;
  return pair;
}

double obstacleGap(const InflatedObstacle& obs1, const InflatedObstacle& obs2) {
  return std::max(0.0, polygonGap(obs1.source(), obs2.source()) - obs1.radius() - obs2.radius());
}

std::vector<TangentEdge> commonTangents(const InflatedObstacle& obs1, const InflatedObstacle& obs2,
                                        std::size_t id1, std::size_t id2) {
  if (obstacleGap(obs1, obs2) <= 0.0) {
    std::ostringstream os;
    os << "obstacles " << id1 << " and " << id2 << " have intersecting closures";
    throw PlanError(ErrorKind::OverlappingObstacles, os.str());
  }

  std::vector<TangencyPair> found;
  std::size_t seeds = 0;
  auto attempt = [&](double seed1, double seed2) {
    ++seeds;
    const auto sol = solveTangency(obs1, obs2, seed1, seed2);
    if (!sol) return;
    const bool dup = std::any_of(found.begin(), found.end(), [&](const TangencyPair& f) {
      return cyclicGap(f.gamma1, sol->gamma1, obs1.perimeter()) <= kDedupTol &&
             cyclicGap(f.gamma2, sol->gamma2, obs2.perimeter()) <= kDedupTol;
    });
    if (!dup) found.push_back(*sol);
  };
  for (const auto& a : obs1.pieces()) {
    if (!a.isArc()) continue;
    for (const auto& b : obs2.pieces()) {
      if (!b.isArc()) continue;
      // Tangents of the two vertex circles that touch both arcs, then the arc midpoints.
      for (const auto& [psi1, psi2] : circleTangentNormals(a.arc(), b.arc())) {
        const auto s1 = gammaOnArc(a, psi1), s2 = gammaOnArc(b, psi2);
        if (s1 && s2) attempt(*s1, *s2);
      }
      attempt(a.gamma_start + 0.5 * a.length, b.gamma_start + 0.5 * b.length);
    }
  }
  if (found.size() != 4) {
    std::ostringstream os;
    os << "expected 4 common tangents between obstacles " << id1 << " and " << id2 << ", found "
       << found.size() << " from " << seeds << " seeds;";
    for (const auto& f : found) os << " (" << f.gamma1 << ", " << f.gamma2 << ")";
    logger().error("{}", os.str());
    throw PlanError(ErrorKind::SolverFailure, os.str());
  }

  const Vec2 c1 = obs1.source().centroid(), c2 = obs2.source().centroid();
  std::vector<TangentEdge> edges;
  edges.reserve(found.size());
  for (const auto& f : found) {
    const Vec2 u = (f.p2 - f.p1).normalized();
    const bool same_side = (cross(u, c1 - f.p1) > 0.0) == (cross(u, c2 - f.p1) > 0.0);
    edges.push_back({{id1, f.gamma1, f.p1},
                     {id2, f.gamma2, f.p2},
                     distance(f.p1, f.p2),
                     same_side ? TangentKind::External : TangentKind::Internal});
  }
  std::sort(edges.begin(), edges.end(), [](const TangentEdge& a, const TangentEdge& b) {
    return std::tie(a.from.gamma, a.to.gamma) < std::tie(b.from.gamma, b.to.gamma);
  });
  return edges;
}

std::vector<TangentEdge> pointTangents(const Vec2& point, const InflatedObstacle& obs, std::size_t id) {
  if (obs.signedDistance(point) <= 1e-12) {
    std::ostringstream os;
    os << "point " << point << " is not strictly outside obstacle " << id;
    throw PlanError(ErrorKind::PointInsideObstacle, os.str());
  }
  // On an arc the residual (p - q) x t reduces to <c - q, n> + rho, so the
  // tangency normals are angle(q - c) -/+ acos(rho / |q - c|).
  std::vector<double> gammas;
  for (const auto& piece : obs.pieces()) {
    if (!piece.isArc()) continue;
    const ArcPiece& arc = piece.arc();
    const Vec2 w = point - arc.center;
    const double dist = w.norm();
    if (dist <= arc.radius) continue;
    const double base = std::atan2(w.y, w.x);
    const double half = std::acos(arc.radius / dist);
    for (double psi : {base - half, base + half}) {
      const auto on_arc = gammaOnArc(piece, psi);
      if (!on_arc) continue;
      double g = *on_arc;
      const Vec2 p = obs.point(g);
      g = canonicalAnchor(obs, g, (p - point).normalized(), point);
      const bool dup = std::any_of(gammas.begin(), gammas.end(),
                                   [&](double h) { return cyclicGap(h, g, obs.perimeter()) <= kDedupTol; });
      if (!dup) gammas.push_back(g);
    }
  }
  if (gammas.size() != 2) {
    std::ostringstream os;
    os << "expected 2 tangents from " << point << " to obstacle " << id << ", found " << gammas.size();
    throw PlanError(ErrorKind::SolverFailure, os.str());
  }
  std::sort(gammas.begin(), gammas.end());
  std::vector<TangentEdge> edges;
  for (double g : gammas) {
    const Vec2 p = obs.point(g);
    edges.push_back({{std::nullopt, 0.0, point}, {id, g, p}, distance(point, p), TangentKind::Terminal});
  }
  return edges;
}

bool segmentCollides(const Vec2& a, const Vec2& b, std::span<const InflatedObstacle> obstacles) {
  for (const auto& obs : obstacles) {
    const Polygon& poly = obs.source();
    double gap = std::numeric_limits<double>::infinity();
    if (poly.signedDistance(a) <= 0.0 || poly.signedDistance(b) <= 0.0) gap = 0.0;
    for (std::size_t i = 0; i < poly.size() && gap > 0.0; ++i)
      gap = std::min(gap, segmentDistance(a, b, poly.vertex(i), poly.vertex(i + 1)));
    if (gap < obs.radius() - 1e-9 * std::max(1.0, obs.radius())) return true;
  }
  return false;
}

}  // namespace tgplan
