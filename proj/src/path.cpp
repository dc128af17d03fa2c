#include "tgplan/path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tgplan/error.hpp"

namespace tgplan {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kZeroLength = 1e-12;

double senseSign(Sense s) { return s == Sense::Ccw ? 1.0 : -1.0; }

}  // namespace

Vec2 PathSegment::pointAt(double s) const {
  if (const auto* st = std::get_if<StraightSegment>(&shape)) {
    if (length <= 0.0) return st->from;
    return st->from + (st->to - st->from) * (s / length);
  }
  const ArcSegment& a = arc();
  return a.center + unitFromAngle(a.start_angle + senseSign(a.sense) * s / a.radius) * a.radius;
}

Vec2 PathSegment::tangentAt(double s) const {
  if (const auto* st = std::get_if<StraightSegment>(&shape)) {
    if (length <= 0.0) return {1.0, 0.0};
    return (st->to - st->from) / length;
  }
  const ArcSegment& a = arc();
  const double sign = senseSign(a.sense);
  return perp(unitFromAngle(a.start_angle + sign * s / a.radius)) * sign;
}

Vec2 PathSegment::curvatureAt(double s) const {
  if (!isArc()) return {};
  const ArcSegment& a = arc();
  return -unitFromAngle(a.start_angle + senseSign(a.sense) * s / a.radius) / a.radius;
}

PathSegment makeStraight(const Vec2& from, const Vec2& to) {
  return {StraightSegment{from, to}, distance(from, to), 0.0};
}

PlannedPath::PlannedPath(std::vector<PathSegment> segments) {
  for (auto& seg : segments) {
    if (seg.length <= kZeroLength) continue;
    if (!segments_.empty()) {
      PathSegment& last = segments_.back();
      if (!last.isArc() && !seg.isArc()) {
        auto& st = std::get<StraightSegment>(last.shape);
        st.to = seg.straight().to;
        last.length = distance(st.from, st.to);
        continue;
      }
      if (last.isArc() && seg.isArc()) {
        auto& a = std::get<ArcSegment>(last.shape);
        const ArcSegment& b = seg.arc();
        if (a.obstacle == b.obstacle && a.sense == b.sense && distance(a.center, b.center) <= 1e-12) {
          last.length += seg.length;
          a.gamma_to = b.gamma_to;
          continue;
        }
      }
    }
    segments_.push_back(seg);
  }
  if (segments_.empty() && !segments.empty()) {
    // Degenerate path (start == goal): keep one zero-length straight at the start.
    const Vec2 p = segments.front().pointAt(0.0);
    segments_.push_back(makeStraight(p, p));
  }
  double offset = 0.0;
  for (auto& seg : segments_) {
    seg.offset = offset;
    offset += seg.length;
  }
  total_length_ = offset;
}

std::vector<double> PlannedPath::cumulativeBreaks() const {
  std::vector<double> b;
  b.reserve(segments_.size() + 1);
  for (const auto& s : segments_) b.push_back(s.offset);
  b.push_back(total_length_);
  return b;
}

std::size_t PlannedPath::straightCount() const {
  return static_cast<std::size_t>(
      std::count_if(segments_.begin(), segments_.end(), [](const PathSegment& s) { return !s.isArc(); }));
}

std::size_t PlannedPath::arcCount() const { return segments_.size() - straightCount(); }

std::size_t PlannedPath::segmentIndex(double gamma) const {
  const double tol = 1e-12 * std::max(1.0, total_length_);
  if (segments_.empty() || gamma < -tol || gamma > total_length_ + tol) {
    std::ostringstream os;
    os << "gamma " << gamma << " outside [0, " << total_length_ << "]";
    throw PlanError(ErrorKind::OutOfRange, os.str());
  }
  auto it = std::upper_bound(segments_.begin(), segments_.end(), gamma,
                             [](double g, const PathSegment& s) { return g < s.offset; });
  if (it == segments_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

Vec2 PlannedPath::point(double gamma) const {
  const PathSegment& s = segments_[segmentIndex(gamma)];
  return s.pointAt(std::clamp(gamma - s.offset, 0.0, s.length));
}

Vec2 PlannedPath::tangent(double gamma) const {
  const PathSegment& s = segments_[segmentIndex(gamma)];
  return s.tangentAt(std::clamp(gamma - s.offset, 0.0, s.length));
}

double PlannedPath::heading(double gamma) const {
  const Vec2 t = tangent(gamma);
  double h = std::atan2(t.y, t.x);
  if (h < 0.0) h += kTwoPi;
  return h >= kTwoPi ? 0.0 : h;
}

Vec2 PlannedPath::startPoint() const { return segments_.front().pointAt(0.0); }
Vec2 PlannedPath::endPoint() const { return segments_.back().pointAt(segments_.back().length); }

Vec2 pathPoint(const PlannedPath& path, double gamma) { return path.point(gamma); }
double pathHeading(const PlannedPath& path, double gamma) { return path.heading(gamma); }

// ---------------------------------------------------------------------------
// Trace intersections, expressed as intervals of path1's arc length.

namespace {

constexpr double kTol = 1e-9;

struct Interval {
  double lo, hi;
};

// Arc-length of `p` (assumed on the circle) along the arc, or -1 if off the arc.
double arcParam(const PathSegment& seg, const Vec2& p) {
  const ArcSegment& a = seg.arc();
  const double theta = std::atan2(p.y - a.center.y, p.x - a.center.x);
  double off = senseSign(a.sense) * (theta - a.start_angle);
  off = std::fmod(off, kTwoPi);
  if (off < 0.0) off += kTwoPi;
  const double s = off * a.radius;
  if (s <= seg.length + kTol) return std::min(s, seg.length);
  if (kTwoPi * a.radius - s <= kTol) return 0.0;
  return -1.0;
}

double straightParam(const PathSegment& seg, const Vec2& p) {
  const StraightSegment& st = seg.straight();
  const double s = dot(p - st.from, seg.tangentAt(0.0));
  if (s < -kTol || s > seg.length + kTol) return -1.0;
  if (distance(seg.pointAt(std::clamp(s, 0.0, seg.length)), p) > kTol) return -1.0;
  return std::clamp(s, 0.0, seg.length);
}

double paramOn(const PathSegment& seg, const Vec2& p) {
  return seg.isArc() ? arcParam(seg, p) : straightParam(seg, p);
}

// Points where the line of straight segment `st` meets the circle of arc segment `ar`.
std::vector<Vec2> lineCircle(const PathSegment& st, const PathSegment& ar) {
  const Vec2 a = st.straight().from;
  const Vec2 r = st.tangentAt(0.0);
  const Vec2 w = a - ar.arc().center;
  const double rad = ar.arc().radius;
  const double b = dot(r, w);
  const double c = w.squaredNorm() - rad * rad;
  const double disc = b * b - c;
  std::vector<Vec2> out;
  if (disc < -kTol * rad) return out;
  if (disc <= kTol * kTol) {
    out.push_back(a + r * (-b));
    return out;
  }
  const double root = std::sqrt(disc);
  out.push_back(a + r * (-b - root));
  out.push_back(a + r * (-b + root));
  return out;
}

void intersectPair(const PathSegment& s1, const PathSegment& s2, std::vector<Interval>& out) {
  auto addPoint = [&](const Vec2& p) {
    const double u = paramOn(s1, p);
    const double v = paramOn(s2, p);
    if (u >= 0.0 && v >= 0.0) out.push_back({s1.offset + u, s1.offset + u});
  };

  if (!s1.isArc() && !s2.isArc()) {
    const Vec2 a = s1.straight().from, r = s1.tangentAt(0.0);
    const Vec2 b = s2.straight().from, q = s2.tangentAt(0.0);
    const double denom = cross(r, q);
    if (std::abs(denom) > 1e-12) {
      const double s = cross(b - a, q) / denom;
      addPoint(a + r * s);
      return;
    }
    if (std::abs(cross(r, b - a)) > kTol) return;
    const double t0 = dot(b - a, r), t1 = dot(s2.straight().to - a, r);
    const double lo = std::max(0.0, std::min(t0, t1)), hi = std::min(s1.length, std::max(t0, t1));
    if (lo <= hi + kTol) out.push_back({s1.offset + lo, s1.offset + std::max(lo, hi)});
    return;
  }
  if (!s1.isArc() || !s2.isArc()) {
    const PathSegment& st = s1.isArc() ? s2 : s1;
    const PathSegment& ar = s1.isArc() ? s1 : s2;
    for (const Vec2& p : lineCircle(st, ar)) addPoint(p);
    return;
  }

  const ArcSegment& a1 = s1.arc();
  const ArcSegment& a2 = s2.arc();
  const Vec2 d = a2.center - a1.center;
  const double dist = d.norm();
  if (dist <= kTol && std::abs(a1.radius - a2.radius) <= kTol) {
    // Same circle: intersect the angular ranges.
    const double w1 = s1.length / a1.radius, w2 = s2.length / a2.radius;
    const double b0 = a1.sense == Sense::Ccw ? a1.start_angle : a1.start_angle - w1;
    double c0 = a2.sense == Sense::Ccw ? a2.start_angle : a2.start_angle - w2;
    c0 = b0 + std::fmod(std::fmod(c0 - b0, kTwoPi) + kTwoPi, kTwoPi) - kTwoPi;
    for (int k = 0; k < 3; ++k, c0 += kTwoPi) {
      const double lo = std::max(b0, c0), hi = std::min(b0 + w1, c0 + w2);
      if (lo > hi + kTol / a1.radius) continue;
      auto toParam = [&](double ang) {
        const double s = a1.sense == Sense::Ccw ? (ang - a1.start_angle) * a1.radius
                                                : (a1.start_angle - ang) * a1.radius;
        return std::clamp(s, 0.0, s1.length);
      };
      const double u0 = toParam(lo), u1 = toParam(std::max(lo, hi));
      out.push_back({s1.offset + std::min(u0, u1), s1.offset + std::max(u0, u1)});
    }
    return;
  }
  if (dist > a1.radius + a2.radius + kTol || dist < std::abs(a1.radius - a2.radius) - kTol || dist <= kTol)
    return;
  const double along = (dist * dist + a1.radius * a1.radius - a2.radius * a2.radius) / (2.0 * dist);
  const double h2 = a1.radius * a1.radius - along * along;
  const Vec2 u = d / dist;
  const Vec2 base = a1.center + u * along;
  if (h2 <= kTol * kTol) {
    addPoint(base);
    return;
  }
  const double h = std::sqrt(h2);
  addPoint(base + perp(u) * h);
  addPoint(base - perp(u) * h);
}

}  // namespace

int countPathIntersections(const PlannedPath& path1, const PlannedPath& path2) {
  std::vector<Interval> pieces;
  for (const auto& s1 : path1.segments())
    for (const auto& s2 : path2.segments()) intersectPair(s1, s2, pieces);
  if (pieces.empty()) return 0;
  std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  int components = 1;
  double reach = pieces.front().hi;
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i].lo > reach + kTol) ++components;
    reach = std::max(reach, pieces[i].hi);
  }
  return components;
}

}  // namespace tgplan
