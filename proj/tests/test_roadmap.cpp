#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/check.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/worlds.hpp"
#include "tgplan/path.hpp"
#include "tgplan/roadmap.hpp"

using namespace tgplan;
using std::numbers::pi;

namespace {

InflatedObstacle square(Vec2 lo, double side, double rho) {
  return inflatePolygon(Polygon::fromVertices({lo, lo + Vec2{side, 0}, lo + Vec2{side, side}, lo + Vec2{0, side}}), rho);
}

std::size_t countKind(const Roadmap& rm, EdgeKind kind) {
  std::size_t n = 0;
  for (const auto& e : rm.edges()) n += e.kind == kind;
  return n;
}

// Direction of travel through an anchor node.
Vec2 travelDirection(const Roadmap& rm, std::size_t node) {
  const auto& n = rm.nodes()[node];
  const Vec2 t = rm.obstacles()[*n.obstacle].tangent(n.gamma);
  return n.sense == Sense::Ccw ? t : -t;
}

// C1 certificate: every tangent edge leaves and enters anchors along their travel direction.
void checkGraphC1(const Roadmap& rm) {
  for (const auto& e : rm.edges()) {
    CHECK(e.length > 0.0);
    if (e.kind != EdgeKind::Tangent) continue;
    const Vec2 u = (rm.nodes()[e.to].point - rm.nodes()[e.from].point).normalized();
    if (rm.nodes()[e.from].role == NodeRole::Anchor) CHECK(distance(u, travelDirection(rm, e.from)) < 1e-9);
    if (rm.nodes()[e.to].role == NodeRole::Anchor) CHECK(distance(u, travelDirection(rm, e.to)) < 1e-9);
    CHECK_FALSE(segmentCollides(rm.nodes()[e.from].point, rm.nodes()[e.to].point, rm.obstacles()));
  }
}

void checkPathC1(const PlannedPath& p) {
  const auto segs = p.segments();
  double sum = 0.0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    sum += segs[i].length;
    if (i + 1 == segs.size()) break;
    CHECK(segs[i].isArc() != segs[i + 1].isArc());
    CHECK(distance(segs[i].pointAt(segs[i].length), segs[i + 1].pointAt(0.0)) < 1e-9);
    // A facet of length ~1e-8 gets its direction from rounded endpoints.
    const double tol = std::min(segs[i].length, segs[i + 1].length) < 1e-6 ? 1e-6 : 1e-9;
    CHECK(distance(segs[i].tangentAt(segs[i].length), segs[i + 1].tangentAt(0.0)) < tol);
  }
  CHECK(std::abs(sum - p.totalLength()) < 1e-9);
  if (!segs.empty()) {
    CHECK_FALSE(segs.front().isArc());
    CHECK_FALSE(segs.back().isArc());
    CHECK(p.straightCount() == p.arcCount() + 1);
  }
}

}  // namespace

TEST_SUITE("roadmap") {
  TEST_CASE("two obstacles give eight anchors") {
    const Roadmap rm = buildRoadmap({square({0, 0}, 1, 0.5), square({3, 0}, 1, 0.5)});
    CHECK(rm.anchorCount() == 8);
    CHECK(rm.nodes().size() == 16);
    CHECK(rm.pairTangents().size() == 4);
    CHECK(countKind(rm, EdgeKind::Tangent) == 8);  // 4 tangents, one per compatible sense
    // Arc chains: 4 anchors per obstacle, 4 arcs per chain, both senses.
    CHECK(countKind(rm, EdgeKind::Arc) == 16);
    checkGraphC1(rm);
  }

  TEST_CASE("one obstacle gives an empty graph") {
    const Roadmap rm = buildRoadmap({square({0, 0}, 1, 0.5)});
    CHECK(rm.nodes().empty());
    CHECK(rm.edges().empty());
  }

  TEST_CASE("tangent blocked by a third obstacle is dropped") {
    std::vector<InflatedObstacle> obs{fixtures::nearCircle({0, 0}, 1.0), fixtures::nearCircle({8, 0}, 1.0),
                                      fixtures::nearCircle({4, 1.2}, 0.5)};
    const Roadmap rm = buildRoadmap(obs);
    std::size_t pair01 = 0;
    for (const auto& t : rm.pairTangents()) {
      if (*t.from.obstacle == 0 && *t.to.obstacle == 1) ++pair01;
      CHECK_FALSE(oracle::sampledCollision(t.from.point, t.to.point, obs));
    }
    const auto all = commonTangents(obs[0], obs[1], 0, 1);
    std::size_t blocked = 0;
    for (const auto& t : all) blocked += oracle::sampledCollision(t.from.point, t.to.point, obs);
    CHECK(blocked >= 1);
    CHECK(pair01 == all.size() - blocked);
  }

  TEST_CASE("terminals on an empty world") {
    const Roadmap rm = attachTerminals(buildRoadmap({}), {0, 0}, {3, 4});
    REQUIRE(rm.edges().size() == 1);
    CHECK(rm.edges()[0].length == doctest::Approx(5.0));
    const PlannedPath p = shortestPath(rm);
    REQUIRE(p.segments().size() == 1);
    CHECK_FALSE(p.segments()[0].isArc());
    CHECK(p.totalLength() == doctest::Approx(5.0));
  }

  TEST_CASE("terminals around a blocking obstacle") {
    const Roadmap rm = attachTerminals(buildRoadmap({fixtures::nearCircle({0, 0}, 1.0)}), {-3, 0}, {3, 0});
    std::size_t direct = 0, terminal = 0;
    for (const auto& e : rm.edges()) {
      const bool from_start = e.from == *rm.startNode(), to_goal = e.to == *rm.goalNode();
      direct += from_start && to_goal;
      terminal += e.kind == EdgeKind::Tangent && (from_start || to_goal);
    }
    CHECK(direct == 0);
    CHECK(terminal == 4);
    checkGraphC1(rm);
  }

  TEST_CASE("terminal inside an obstacle is rejected") {
    const Roadmap rm = buildRoadmap({square({0, 0}, 1, 0.5), square({3, 0}, 1, 0.5)});
    CHECK_THROWS_KIND(attachTerminals(rm, {0.5, 0.5}, {10, 0}), ErrorKind::PointInsideObstacle);
    CHECK_THROWS_KIND(attachTerminals(rm, {-5, 0}, {1.2, 0.5}), ErrorKind::PointInsideObstacle);
  }

  TEST_CASE("start equal to goal") {
    const Roadmap rm = attachTerminals(buildRoadmap({square({0, 0}, 1, 0.5), square({3, 0}, 1, 0.5)}), {2, 3}, {2, 3});
    for (const auto& e : rm.edges()) CHECK_FALSE((e.from == *rm.startNode() && e.to == *rm.goalNode()));
    const PlannedPath p = shortestPath(rm);
    CHECK(p.totalLength() == 0.0);
    CHECK(distance(p.point(0.0), {2, 3}) == 0.0);
  }

  TEST_CASE("kappa_m") {
    CHECK(kappaM(std::vector<InflatedObstacle>{}) == 1.0);
    const auto sq = square({0, 0}, 1, 0.5);
    CHECK(kappaM(std::vector{sq}) == doctest::Approx((4 + pi) / 4).epsilon(1e-12));
    CHECK(kappaM(std::vector{sq, square({5, 5}, 1, 0.5)}) == doctest::Approx((4 + pi) / 4).epsilon(1e-12));
  }

  TEST_CASE("shortest path around a disk") {
    const Roadmap rm = attachTerminals(buildRoadmap({fixtures::nearCircle({0, 0}, 1.0)}), {-3, 0}, {3, 0});
    const PlannedPath p = shortestPath(rm);
    // Two tangents of length sqrt(9 - 1) and the arc between the tangency points.
    const double expect = 2 * std::sqrt(8.0) + (pi - 2 * std::acos(1.0 / 3.0));
    CHECK(p.totalLength() == doctest::Approx(expect).epsilon(1e-8));
    CHECK(p.totalLength() == doctest::Approx(oracle::exhaustiveShortest(rm)).epsilon(1e-12));
    // The polygonal disk has facets of length ~1e-8 between its vertex arcs.
    std::size_t long_straights = 0;
    double arc = 0.0;
    for (const auto& seg : p.segments()) {
      long_straights += !seg.isArc() && seg.length > 1e-6;
      if (seg.isArc()) arc += seg.length;
    }
    CHECK(long_straights == 2);
    CHECK(arc == doctest::Approx(pi - 2 * std::acos(1.0 / 3.0)).epsilon(1e-6));
    CHECK(p.segments().front().length == doctest::Approx(std::sqrt(8.0)).epsilon(1e-8));
    CHECK(p.segments().back().length == doctest::Approx(std::sqrt(8.0)).epsilon(1e-8));
    checkPathC1(p);
  }

  TEST_CASE("ellipse filter examples") {
    const auto near = square({4, -0.5}, 1, 0.5);
    const auto far = square({5, 20}, 1, 0.5);
    const Roadmap rm = attachTerminals(buildRoadmap({near, far}), {0, 0}, {10, 0});
    const Roadmap f = ellipseFilter(rm);
    std::size_t far_active = 0, near_active = 0;
    for (std::size_t i = 0; i < rm.anchorCount(); ++i) {
      const auto& n = f.nodes()[2 * i];
      (*n.obstacle == 1 ? far_active : near_active) += f.isActive(2 * i);
    }
    CHECK(far_active == 0);
    CHECK(near_active > 0);
    CHECK(f.isActive(*f.startNode()));
    CHECK(f.isActive(*f.goalNode()));
    CHECK(shortestPath(f).totalLength() == doctest::Approx(shortestPath(rm).totalLength()).epsilon(1e-12));

    // K = 1: the ellipse is the segment itself and only the direct edge survives.
    const Roadmap side = attachTerminals(buildRoadmap({square({4, 3}, 1, 0.5), square({4, -4}, 1, 0.5)}), {0, 0}, {10, 0});
    const Roadmap one = ellipseFilter(side, 1.0);
    CHECK(one.activeNodeCount() == 2);
    CHECK(one.edges().size() == 1);

    // Everything inside: unchanged.
    const Roadmap big = ellipseFilter(rm, 100.0);
    CHECK(big.activeNodeCount() == rm.activeNodeCount());
    CHECK(big.edges().size() == rm.edges().size());
  }

  TEST_CASE("no path when the filter removes every detour") {
    const Roadmap rm = attachTerminals(buildRoadmap({fixtures::nearCircle({5, 0}, 1.0)}), {0, 0}, {10, 0});
    CHECK_THROWS_KIND(shortestPath(ellipseFilter(rm, 1.0)), ErrorKind::NoPath);
    CHECK_THROWS_KIND(shortestPath(buildRoadmap({})), ErrorKind::NoPath);
  }

  TEST_CASE("path point and heading") {
    const Roadmap rm = attachTerminals(buildRoadmap({square({2, -0.5}, 1, 0.5)}), {0, 0}, {6, 0.2});
    const PlannedPath p = shortestPath(rm);
    CHECK(distance(pathPoint(p, 0.0), {0, 0}) < 1e-15);
    CHECK(distance(pathPoint(p, p.totalLength()), {6, 0.2}) < 1e-9);
    const Vec2 d0 = p.segments()[0].straight().to - p.segments()[0].straight().from;
    CHECK(pathHeading(p, 0.0) == doctest::Approx(std::fmod(std::atan2(d0.y, d0.x) + 2 * pi, 2 * pi)));
    for (const auto& s : p.segments()) {
      if (!s.isArc()) continue;
      const Vec2 mid = pathPoint(p, s.offset + 0.5 * s.length);
      CHECK(std::abs(distance(mid, s.arc().center) - 0.5) < 1e-9);
      const auto& src = rm.obstacles()[s.arc().obstacle].source();
      bool at_vertex = false;
      for (const auto& v : src.vertices()) at_vertex = at_vertex || distance(v, s.arc().center) < 1e-12;
      CHECK(at_vertex);
    }
    CHECK_THROWS_KIND(pathPoint(p, -1e-3), ErrorKind::OutOfRange);
    CHECK_THROWS_KIND(pathPoint(p, p.totalLength() + 1e-3), ErrorKind::OutOfRange);
    // Heading is continuous.
    const int n = 2000;
    for (int i = 1; i <= n; ++i) {
      const double a = pathHeading(p, p.totalLength() * (i - 1) / n), b = pathHeading(p, p.totalLength() * i / n);
      CHECK(std::abs(std::remainder(b - a, 2 * pi)) < 0.01);
    }
    checkPathC1(p);
  }

  TEST_CASE("path intersection counting") {
    const PlannedPath a({makeStraight({0, 0}, {4, 4})});
    const PlannedPath b({makeStraight({0, 4}, {4, 0})});
    const PlannedPath c({makeStraight({0, 5}, {4, 9})});
    CHECK(countPathIntersections(a, a) == 1);
    CHECK(countPathIntersections(a, b) == 1);
    CHECK(countPathIntersections(a, c) == 0);
    const Roadmap rm = attachTerminals(buildRoadmap({fixtures::nearCircle({0, 0}, 1.0)}), {-3, 0}, {3, 0});
    const PlannedPath around = shortestPath(rm);
    CHECK(countPathIntersections(around, around) == 1);
    CHECK(countPathIntersections(around, PlannedPath({makeStraight({0, -3}, {0, 3})})) == 1);
    // Touching at one point counts.
    const double top = around.point(0.5 * around.totalLength()).y;
    CHECK(std::abs(std::abs(top) - 1.0) < 1e-9);
    CHECK(countPathIntersections(PlannedPath({makeStraight({-3, top}, {3, top})}), around) == 1);
  }

  TEST_CASE("dijkstra is deterministic and matches enumeration") {
    worlds::Rng rng(31);
    int small = 0;
    for (int k = 0; k < 60; ++k) {
      const auto s = worlds::randomScenario(rng, {.min_obstacles = 1, .max_obstacles = 3, .min_vertices = 3, .max_vertices = 4});
      const Roadmap rm = attachTerminals(buildRoadmap(s.inflated()), s.start, s.goal);
      checkGraphC1(rm);
      const PlannedPath p = shortestPath(rm);
      const PlannedPath q = shortestPath(rm);
      CHECK(p.totalLength() == q.totalLength());
      CHECK(p.segments().size() == q.segments().size());
      checkPathC1(p);
      if (rm.activeNodeCount() <= 12) {
        ++small;
        CHECK(p.totalLength() == doctest::Approx(oracle::exhaustiveShortest(rm)).epsilon(1e-12));
      }
    }
    CHECK(small >= 5);
  }

  TEST_CASE("property: filter is lossless and the detour is bounded") {
    worlds::Rng rng(32);
    for (int k = 0; k < 40; ++k) {
      const auto s = worlds::randomScenario(rng);
      const auto obs = s.inflated();
      const Roadmap rm = attachTerminals(buildRoadmap(obs), s.start, s.goal);
      const double full = shortestPath(rm).totalLength();
      CHECK(std::abs(shortestPath(ellipseFilter(rm)).totalLength() - full) < 1e-9);
      CHECK(full <= kappaM(obs) * distance(s.start, s.goal) + 1e-9);
    }
  }
}
