#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/check.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/worlds.hpp"
#include "tgplan/tangents.hpp"

using namespace tgplan;
using std::numbers::pi;

namespace {

const double kSqrt3Half = std::sqrt(3.0) / 2.0;

// Two circles of radius 1 centered at (0,0) and (4,0).
struct TwoCircles {
  InflatedObstacle a = fixtures::nearCircle({0, 0}, 1.0);
  InflatedObstacle b = fixtures::nearCircle({4, 0}, 1.0);
  double at(const InflatedObstacle& o, double psi) const { return *fixtures::gammaAtNormal(o, psi); }
};

double slope(Vec2 v) { return v.y / v.x; }

bool closeTo(Vec2 p, Vec2 q, double tol) { return distance(p, q) < tol; }

}  // namespace

TEST_SUITE("tangents") {
  TEST_CASE("objective vanishes on the horizontal common tangent") {
    TwoCircles w;
    const double g1 = w.at(w.a, pi / 2), g2 = w.at(w.b, pi / 2);
    CHECK(closeTo(w.a.point(g1), {0, 1}, 1e-12));
    CHECK(closeTo(w.b.point(g2), {4, 1}, 1e-12));
    CHECK(tangencyObjective(w.a, w.b, g1, g2) < 1e-24);
    const auto g = tangencyGradient(w.a, w.b, g1, g2);
    CHECK(std::abs(g[0]) < 1e-12);
    CHECK(std::abs(g[1]) < 1e-12);
  }

  TEST_CASE("objective rejects vertical slopes") {
    TwoCircles w;
    CHECK_THROWS_KIND(tangencyObjective(w.a, w.b, w.at(w.a, 0.0), w.at(w.b, pi)), ErrorKind::VerticalSlope);
    CHECK_THROWS_KIND(tangencyGradient(w.a, w.b, w.at(w.a, 0.0), w.at(w.b, pi)), ErrorKind::VerticalSlope);
  }

  TEST_CASE("objective matches direct slope arithmetic") {
    TwoCircles w;
    const double psi1 = pi / 2, psi2 = pi / 2 + 0.1;
    const double g1 = w.at(w.a, psi1), g2 = w.at(w.b, psi2);
    // Independent evaluation from the arc centers and normal angles.
    auto arcPoint = [](const InflatedObstacle& o, double g, double psi) {
      const auto& arc = o.pieces()[o.pieceIndex(g)].arc();
      return arc.center + unitFromAngle(psi) * arc.radius;
    };
    const Vec2 p1 = arcPoint(w.a, g1, psi1), p2 = arcPoint(w.b, g2, psi2);
    const double m = slope(p2 - p1);
    const double m1 = slope({-std::sin(psi1), std::cos(psi1)});
    const double m2 = slope({-std::sin(psi2), std::cos(psi2)});
    const double f = (m - m1) * (m - m1) + (m - m2) * (m - m2);
    CHECK(f > 0.0);
    CHECK(std::abs(tangencyObjective(w.a, w.b, g1, g2) - f) < 1e-12);
  }

  TEST_CASE("gradient mirrors under reflection") {
    // Reflecting about x = 2 maps normal angle psi on one circle to pi - psi on
    // the other and reverses the boundary orientation, so
    // grad f(a, b) = -(g2, g1) evaluated at (pi - b, pi - a).
    TwoCircles w;
    for (auto [a, b] : {std::pair{1.2, 1.9}, std::pair{2.0, 0.7}, std::pair{-1.0, -2.3}}) {
      const auto g = tangencyGradient(w.a, w.b, w.at(w.a, a), w.at(w.b, b));
      const auto h = tangencyGradient(w.a, w.b, w.at(w.a, pi - b), w.at(w.b, pi - a));
      CHECK(g[0] == doctest::Approx(-h[1]).epsilon(1e-6));
      CHECK(g[1] == doctest::Approx(-h[0]).epsilon(1e-6));
    }
  }

  TEST_CASE("property: gradient and Hessian match finite differences") {
    worlds::Rng rng(21);
    int checked = 0;
    while (checked < 1000) {
      const auto pair = worlds::randomPair(rng);
      const InflatedObstacle o1(pair.a, pair.inflation), o2(pair.b, pair.inflation);
      const double g1 = worlds::uniform(rng, 0.0, o1.perimeter());
      const double g2 = worlds::uniform(rng, 0.0, o2.perimeter());
      const double h = 1e-6;
      // Stay on one smooth piece for the stencil.
      auto smooth = [&](const InflatedObstacle& o, double g) {
        const double local = o.wrap(g) - o.pieces()[o.pieceIndex(g)].gamma_start;
        return local > 4 * h && o.pieces()[o.pieceIndex(g)].length - local > 4 * h;
      };
      if (!smooth(o1, g1) || !smooth(o2, g2)) continue;
      try {
        const auto g = tangencyGradient(o1, o2, g1, g2);
        const double fd1 = (tangencyObjective(o1, o2, g1 + h, g2) - tangencyObjective(o1, o2, g1 - h, g2)) / (2 * h);
        const double fd2 = (tangencyObjective(o1, o2, g1, g2 + h) - tangencyObjective(o1, o2, g1, g2 - h)) / (2 * h);
        const double f = tangencyObjective(o1, o2, g1, g2);
        // Skip near-vertical configurations where the objective is huge and FD is ill-conditioned.
        if (f > 1e6) continue;
        const double scale = std::max({1.0, std::abs(g[0]), std::abs(g[1])});
        CHECK(std::abs(g[0] - fd1) / scale < 1e-6);
        CHECK(std::abs(g[1] - fd2) / scale < 1e-6);
        const auto H = tangencyHessian(o1, o2, g1, g2);
        const auto gp = tangencyGradient(o1, o2, g1 + h, g2), gm = tangencyGradient(o1, o2, g1 - h, g2);
        const auto gq = tangencyGradient(o1, o2, g1, g2 + h), gr = tangencyGradient(o1, o2, g1, g2 - h);
        const double hs = std::max({1.0, std::abs(H.f11), std::abs(H.f22), std::abs(H.f12)});
        CHECK(std::abs(H.f11 - (gp[0] - gm[0]) / (2 * h)) / hs < 1e-5);
        CHECK(std::abs(H.f22 - (gq[1] - gr[1]) / (2 * h)) / hs < 1e-5);
        CHECK(std::abs(H.f12 - (gp[1] - gm[1]) / (2 * h)) / hs < 1e-5);
        ++checked;
      } catch (const PlanError& e) {
        REQUIRE((e.kind() == ErrorKind::VerticalSlope));
      }
    }
  }

  TEST_CASE("common tangents of two circles") {
    TwoCircles w;
    const auto t = commonTangents(w.a, w.b);
    REQUIRE(t.size() == 4);
    const double tol = 1e-6;
    int external = 0, internal = 0;
    for (const auto& e : t) {
      const Vec2 p = e.from.point, q = e.to.point;
      if (e.kind == TangentKind::External) {
        ++external;
        const double s = p.y > 0 ? 1.0 : -1.0;
        CHECK(closeTo(p, {0, s}, tol));
        CHECK(closeTo(q, {4, s}, tol));
      } else {
        ++internal;
        const double s = p.y > 0 ? 1.0 : -1.0;
        CHECK(closeTo(p, {0.5, s * kSqrt3Half}, tol));
        CHECK(closeTo(q, {3.5, -s * kSqrt3Half}, tol));
      }
      CHECK(e.length == doctest::Approx(distance(p, q)));
    }
    CHECK(external == 2);
    CHECK(internal == 2);
  }

  TEST_CASE("common tangents agree with the circle oracle") {
    const Vec2 c1{0.5, -1.0}, c2{6.0, 2.5};
    const auto a = fixtures::nearCircle(c1, 1.3), b = fixtures::nearCircle(c2, 0.7);
    const auto expect = oracle::circleCommonTangents(c1, 1.3, c2, 0.7);
    const auto got = commonTangents(a, b);
    REQUIRE(got.size() == 4);
    for (const auto& [p, q] : expect) {
      bool match = false;
      for (const auto& e : got) match = match || (closeTo(e.from.point, p, 1e-6) && closeTo(e.to.point, q, 1e-6));
      CHECK(match);
    }
  }

  TEST_CASE("far-apart obstacles give tangents along the center line") {
    const auto p = worlds::regularPolygon({0, 0}, 1.0, 5);
    const double d = 1000.0;
    const InflatedObstacle a(p, 0.3);
    const InflatedObstacle b(worlds::regularPolygon({d, 0}, 1.0, 5), 0.3);
    for (const auto& e : commonTangents(a, b)) {
      const Vec2 u = e.direction();
      CHECK(std::abs(u.y) < 4.0 * 1.3 / d);
      CHECK(u.x > 0.0);
    }
  }

  TEST_CASE("overlapping obstacles are rejected") {
    const auto a = fixtures::nearCircle({0, 0}, 1.0), b = fixtures::nearCircle({1.5, 0}, 1.0);
    CHECK_THROWS_KIND(commonTangents(a, b), ErrorKind::OverlappingObstacles);
    const auto c = fixtures::nearCircle({2.0, 0}, 1.0);  // touching
    CHECK_THROWS_KIND(commonTangents(a, c), ErrorKind::OverlappingObstacles);
  }

  TEST_CASE("point tangents") {
    const auto o = fixtures::nearCircle({0, 0}, 1.0);
    const auto t = pointTangents({2, 0}, o);
    REQUIRE(t.size() == 2);
    const auto expect = oracle::pointCircleTangents({2, 0}, {0, 0}, 1.0);
    for (const auto& q : expect) {
      CHECK((closeTo(t[0].to.point, q, 1e-6) || closeTo(t[1].to.point, q, 1e-6)));
      CHECK(std::abs(std::abs(q.y) - kSqrt3Half) < 1e-12);
      CHECK(q.x == doctest::Approx(0.5));
    }
    for (const auto& e : t) {
      CHECK(e.kind == TangentKind::Terminal);
      CHECK(std::abs(cross(e.direction(), o.tangent(e.to.gamma))) < 1e-9);
    }
    CHECK_THROWS_KIND(pointTangents({0.2, 0.1}, o), ErrorKind::PointInsideObstacle);
    CHECK_THROWS_KIND(pointTangents(o.point(0.3), o), ErrorKind::PointInsideObstacle);
    const auto far = pointTangents({1e6, 0}, o);
    for (const auto& e : far) CHECK(std::abs(std::abs(e.to.point.y) - 1.0) < 1e-5);
  }

  TEST_CASE("point tangents on polygons are tangent") {
    worlds::Rng rng(22);
    for (int k = 0; k < 200; ++k) {
      const auto p = worlds::randomConvexPolygon(rng, {0, 0}, worlds::uniform(rng, 0.3, 2.0), worlds::uniformInt(rng, 3, 8));
      const InflatedObstacle o(p, worlds::uniform(rng, 0.1, 1.0));
      const Vec2 q = unitFromAngle(worlds::uniform(rng, 0, 2 * pi)) * worlds::uniform(rng, 3.5, 10.0);
      const auto t = pointTangents(q, o);
      REQUIRE(t.size() == 2);
      for (const auto& e : t) {
        CHECK(std::abs(cross(e.direction(), o.tangent(e.to.gamma))) < 1e-9);
        CHECK(o.pieces()[o.pieceIndex(e.to.gamma)].isArc());
        CHECK_FALSE(segmentCollides(q, e.to.point, std::span(&o, 1)));
      }
    }
  }

  TEST_CASE("segment collision") {
    const std::vector<InflatedObstacle> obs{fixtures::nearCircle({0, 0}, 1.0)};
    CHECK_FALSE(segmentCollides({-3, 1}, {3, 1}, obs));  // grazes the top
    CHECK(segmentCollides({-3, 0}, {3, 0}, obs));        // through the center
    CHECK_FALSE(segmentCollides({-3, 2}, {3, 2}, obs));
    // A third obstacle straddling the segment between two others.
    const std::vector<InflatedObstacle> three{fixtures::nearCircle({0, 0}, 1.0), fixtures::nearCircle({8, 0}, 1.0),
                                              fixtures::nearCircle({4, 1.2}, 0.5)};
    const Vec2 a{0, 1}, b{8, 1};
    CHECK(segmentCollides(a, b, three));
    CHECK(oracle::sampledCollision(a, b, three));
  }

  TEST_CASE("property: segment collision agrees with sampling") {
    worlds::Rng rng(23);
    int disagreements = 0, hits = 0;
    for (int k = 0; k < 300; ++k) {
      const auto s = worlds::randomScenario(rng, {.min_obstacles = 2, .max_obstacles = 5});
      const auto obs = s.inflated();
      const Vec2 a{worlds::uniform(rng, -1, 11), worlds::uniform(rng, -1, 11)};
      const Vec2 b{worlds::uniform(rng, -1, 11), worlds::uniform(rng, -1, 11)};
      const bool got = segmentCollides(a, b, obs);
      const bool sampled = oracle::sampledCollision(a, b, obs);
      // Sampling can only miss shallow cuts; it never reports a false hit.
      if (sampled) CHECK(got);
      if (got != sampled) ++disagreements;
      hits += got;
    }
    CHECK(hits > 50);
    CHECK(disagreements <= 3);
  }

  TEST_CASE("property: random pairs give four certified tangents") {
    worlds::Rng rng(24);
    for (int k = 0; k < 200; ++k) {
      const auto pair = worlds::randomPair(rng);
      const InflatedObstacle o1(pair.a, pair.inflation), o2(pair.b, pair.inflation);
      const auto t = commonTangents(o1, o2);
      REQUIRE(t.size() == 4);
      int external = 0;
      for (const auto& e : t) {
        const Vec2 u = e.direction();
        CHECK(std::abs(cross(u, o1.tangent(e.from.gamma))) < 1e-9);
        CHECK(std::abs(cross(u, o2.tangent(e.to.gamma))) < 1e-9);
        const auto c = fixtures::chordFrameCertificate(o1, o2, e.from.gamma, e.to.gamma);
        CHECK(c.f < 1e-12);
        CHECK(c.grad < 1e-8);
        CHECK(c.det_formula >= 0.0);
        // Sides of the chord line: sampled boundary points never cross it.
        double s1min = 1e300, s1max = -1e300, s2min = 1e300, s2max = -1e300;
        for (int j = 0; j < 400; ++j) {
          const double d1 = cross(u, o1.point(o1.perimeter() * j / 400) - e.from.point);
          const double d2 = cross(u, o2.point(o2.perimeter() * j / 400) - e.from.point);
          s1min = std::min(s1min, d1), s1max = std::max(s1max, d1);
          s2min = std::min(s2min, d2), s2max = std::max(s2max, d2);
        }
        const bool o1_left = s1max > -s1min, o2_left = s2max > -s2min;
        CHECK((s1min >= -1e-9 || s1max <= 1e-9));
        CHECK((s2min >= -1e-9 || s2max <= 1e-9));
        CHECK((o1_left == o2_left) == (e.kind == TangentKind::External));
        external += e.kind == TangentKind::External;
        // Anchors sit on arcs (possibly at an arc end).
        for (const auto& [o, g] : {std::pair{&o1, e.from.gamma}, std::pair{&o2, e.to.gamma}}) {
          const auto idx = o->pieceIndex(g);
          const bool on_arc = o->pieces()[idx].isArc() || std::abs(o->wrap(g) - o->pieces()[idx].gamma_start) < 1e-9;
          CHECK(on_arc);
        }
      }
      CHECK(external == 2);
    }
  }
}
