#include "tgplan/roadmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "tgplan/error.hpp"
#include "tgplan/log.hpp"

namespace tgplan {
namespace {

constexpr double kAnchorMergeTol = 1e-9;

// Which list a tangent endpoint comes from.
enum class Source { Pair, Start, Goal };

struct EndpointRef {
  std::size_t obstacle;
  double gamma;
  Vec2 point;
  Source source;
  std::size_t index;  // tangent index within its list
  bool at_from;       // endpoint is TangentEdge::from
};

Sense senseAlong(const InflatedObstacle& obs, double gamma, const Vec2& travel) {
  return dot(travel, obs.tangent(gamma)) > 0.0 ? Sense::Ccw : Sense::Cw;
}

std::size_t nodeId(std::size_t anchor, Sense s) { return 2 * anchor + (s == Sense::Cw ? 1 : 0); }

bool collidesWithOthers(const Vec2& a, const Vec2& b, std::span<const InflatedObstacle> obstacles,
                        std::optional<std::size_t> skip1, std::optional<std::size_t> skip2) {
  for (std::size_t k = 0; k < obstacles.size(); ++k) {
    if (k == skip1 || k == skip2) continue;
    if (segmentCollides(a, b, obstacles.subspan(k, 1))) return true;
  }
  return false;
}

// Appends the boundary stretch of `length` starting at `gamma` in direction `sense`.
void appendBoundary(const InflatedObstacle& obs, std::size_t obstacle_id, double gamma, double length, Sense sense,
                    std::vector<PathSegment>& out) {
  const auto pieces = obs.pieces();
  const std::size_t n = pieces.size();
  std::size_t idx = obs.pieceIndex(gamma);
  double local = obs.wrap(gamma) - pieces[idx].gamma_start;
  double remaining = length;
  const double eps = 1e-14 * std::max(1.0, obs.perimeter());

  auto emit = [&](const BoundaryPiece& piece, double s0, double s1) {
    // s0 -> s1 in piece-local arc length; s1 < s0 for clockwise travel.
    if (piece.isArc()) {
      const ArcPiece& a = piece.arc();
      ArcSegment seg{obstacle_id, a.center, a.radius, a.start_angle + s0 / a.radius, sense,
                     obs.wrap(piece.gamma_start + s0), obs.wrap(piece.gamma_start + s1)};
      out.push_back({seg, std::abs(s1 - s0), 0.0});
    } else {
      const SegmentPiece& sp = piece.segment();
      const Vec2 dir = (sp.end - sp.start) / piece.length;
      out.push_back(makeStraight(sp.start + dir * s0, sp.start + dir * s1));
    }
  };

  if (sense == Sense::Ccw) {
    for (std::size_t guard = 0; remaining > eps && guard <= n + 1; ++guard) {
      const BoundaryPiece& piece = pieces[idx];
      const double take = std::min(piece.length - local, remaining);
      emit(piece, local, local + take);
      remaining -= take;
      idx = (idx + 1) % n;
      local = 0.0;
    }
  } else {
    for (std::size_t guard = 0; remaining > eps && guard <= n + 1; ++guard) {
      if (local <= eps) {
        idx = (idx + n - 1) % n;
        local = pieces[idx].length;
      }
      const BoundaryPiece& piece = pieces[idx];
      const double take = std::min(local, remaining);
      emit(piece, local, local - take);
      remaining -= take;
      local -= take;
    }
  }
}

}  // namespace

std::size_t Roadmap::activeNodeCount() const {
  return static_cast<std::size_t>(std::count(excluded_.begin(), excluded_.end(), false));
}

std::optional<std::size_t> Roadmap::startNode() const {
  if (!start_) return std::nullopt;
  return 2 * anchor_count_;
}

std::optional<std::size_t> Roadmap::goalNode() const {
  if (!goal_) return std::nullopt;
  return 2 * anchor_count_ + 1;
}

void Roadmap::rebuild(const std::vector<bool>* anchor_excluded) {
  std::vector<EndpointRef> refs;
  auto collect = [&](const std::vector<TangentEdge>& list, Source src) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (bool at_from : {true, false}) {
        const Anchor& a = at_from ? list[i].from : list[i].to;
        if (!a.obstacle) continue;
        refs.push_back({*a.obstacle, obstacles_[*a.obstacle].wrap(a.gamma), a.point, src, i, at_from});
      }
    }
  };
  collect(pair_tangents_, Source::Pair);
  collect(start_tangents_, Source::Start);
  collect(goal_tangents_, Source::Goal);

  std::vector<std::size_t> order(refs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(refs[a].obstacle, refs[a].gamma) < std::tie(refs[b].obstacle, refs[b].gamma);
  });

  // Group references into anchors; ref_anchor maps each reference to its anchor.
  struct AnchorInfo {
    std::size_t obstacle;
    double gamma;
    Vec2 point;
  };
  std::vector<AnchorInfo> anchors;
  std::vector<std::size_t> ref_anchor(refs.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const EndpointRef& r = refs[order[k]];
    if (!anchors.empty() && anchors.back().obstacle == r.obstacle &&
        r.gamma - anchors.back().gamma <= kAnchorMergeTol) {
      ref_anchor[order[k]] = anchors.size() - 1;
      continue;
    }
    anchors.push_back({r.obstacle, r.gamma, r.point});
    ref_anchor[order[k]] = anchors.size() - 1;
  }
  // Wrap-around duplicates: a last anchor just below the perimeter equals the first one.
  std::vector<std::size_t> remap(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) remap[i] = i;
  {
    std::size_t begin = 0;
    while (begin < anchors.size()) {
      std::size_t end = begin;
      while (end < anchors.size() && anchors[end].obstacle == anchors[begin].obstacle) ++end;
      const double period = obstacles_[anchors[begin].obstacle].perimeter();
      if (end - begin >= 2 && anchors[begin].gamma + period - anchors[end - 1].gamma <= kAnchorMergeTol)
        remap[end - 1] = begin;
      begin = end;
    }
  }
  std::vector<AnchorInfo> kept;
  std::vector<std::size_t> kept_index(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (remap[i] != i) continue;
    kept_index[i] = kept.size();
    kept.push_back(anchors[i]);
  }
  for (auto& a : ref_anchor) a = kept_index[remap[a]];
  anchors = std::move(kept);
  anchor_count_ = anchors.size();

  nodes_.clear();
  for (const auto& a : anchors) {
    for (Sense s : {Sense::Ccw, Sense::Cw}) nodes_.push_back({NodeRole::Anchor, a.obstacle, a.gamma, a.point, s});
  }
  if (start_) nodes_.push_back({NodeRole::Start, std::nullopt, 0.0, *start_, Sense::Ccw});
  if (goal_) nodes_.push_back({NodeRole::Goal, std::nullopt, 0.0, *goal_, Sense::Ccw});

  excluded_.assign(nodes_.size(), false);
  if (anchor_excluded) {
    for (std::size_t i = 0; i < anchor_count_; ++i) excluded_[2 * i] = excluded_[2 * i + 1] = (*anchor_excluded)[i];
  }

  edges_.clear();
  auto addEdge = [&](std::size_t from, std::size_t to, double length, EdgeKind kind, TangentKind tk) {
    if (excluded_[from] || excluded_[to] || !(length > 0.0)) return;
    edges_.push_back({from, to, length, kind, tk});
  };

  // Reference lookup: (source, index, at_from) -> anchor.
  auto anchorOf = [&](Source src, std::size_t index, bool at_from) {
    for (std::size_t i = 0; i < refs.size(); ++i)
      if (refs[i].source == src && refs[i].index == index && refs[i].at_from == at_from) return ref_anchor[i];
    throw PlanError(ErrorKind::SolverFailure, "tangent endpoint without anchor");
  };
  auto node = [&](std::size_t anchor, const Vec2& travel) {
    const auto& a = anchors[anchor];
    return nodeId(anchor, senseAlong(obstacles_[a.obstacle], a.gamma, travel));
  };

  for (std::size_t i = 0; i < pair_tangents_.size(); ++i) {
    const TangentEdge& t = pair_tangents_[i];
    const std::size_t a = anchorOf(Source::Pair, i, true);
    const std::size_t b = anchorOf(Source::Pair, i, false);
    const Vec2 u = t.direction();
    addEdge(node(a, u), node(b, u), t.length, EdgeKind::Tangent, t.kind);
    addEdge(node(b, -u), node(a, -u), t.length, EdgeKind::Tangent, t.kind);
  }
  if (start_) {
    const std::size_t s = *startNode();
    for (std::size_t i = 0; i < start_tangents_.size(); ++i) {
      const TangentEdge& t = start_tangents_[i];
      addEdge(s, node(anchorOf(Source::Start, i, false), t.direction()), t.length, EdgeKind::Tangent,
              TangentKind::Terminal);
    }
  }
  if (goal_) {
    const std::size_t g = *goalNode();
    for (std::size_t i = 0; i < goal_tangents_.size(); ++i) {
      const TangentEdge& t = goal_tangents_[i];
      addEdge(node(anchorOf(Source::Goal, i, false), -t.direction()), g, t.length, EdgeKind::Tangent,
              TangentKind::Terminal);
    }
  }
  if (start_ && goal_ && direct_)
    addEdge(*startNode(), *goalNode(), distance(*start_, *goal_), EdgeKind::Tangent, TangentKind::Terminal);

  // Boundary arcs between parameter-adjacent anchors, in both senses.
  for (std::size_t begin = 0; begin < anchors.size();) {
    std::size_t end = begin;
    while (end < anchors.size() && anchors[end].obstacle == anchors[begin].obstacle) ++end;
    const double period = obstacles_[anchors[begin].obstacle].perimeter();
    const std::size_t count = end - begin;
    if (count >= 2) {
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t i = begin + k;
        const std::size_t j = begin + (k + 1) % count;
        double gap = anchors[j].gamma - anchors[i].gamma;
        if (gap <= 0.0) gap += period;
        addEdge(nodeId(i, Sense::Ccw), nodeId(j, Sense::Ccw), gap, EdgeKind::Arc, TangentKind::External);
        addEdge(nodeId(j, Sense::Cw), nodeId(i, Sense::Cw), gap, EdgeKind::Arc, TangentKind::External);
      }
    }
    begin = end;
  }

  out_.assign(nodes_.size(), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) out_[edges_[e].from].push_back(e);
}

Roadmap buildRoadmap(std::vector<InflatedObstacle> obstacles) {
  Roadmap r;
  r.obstacles_ = std::move(obstacles);
  const auto& obs = r.obstacles_;
  std::size_t pruned = 0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    for (std::size_t j = i + 1; j < obs.size(); ++j) {
      for (auto& t : commonTangents(obs[i], obs[j], i, j)) {
        if (collidesWithOthers(t.from.point, t.to.point, obs, i, j)) {
          ++pruned;
          continue;
        }
        r.pair_tangents_.push_back(t);
      }
    }
  }
  r.rebuild(nullptr);
  logger().debug("roadmap: {} obstacles, {} tangents kept, {} pruned, {} anchors", obs.size(),
                 r.pair_tangents_.size(), pruned, r.anchor_count_);
  return r;
}

Roadmap attachTerminals(const Roadmap& roadmap, const Vec2& start, const Vec2& goal) {
  Roadmap r = roadmap;
  const auto& obs = r.obstacles_;
  for (const Vec2* p : {&start, &goal}) {
    for (std::size_t k = 0; k < obs.size(); ++k) {
      if (obs[k].signedDistance(*p) <= 1e-12)
        throw PlanError(ErrorKind::PointInsideObstacle, "terminal point is not outside obstacle " + std::to_string(k));
    }
  }
  r.start_ = start;
  r.goal_ = goal;
  r.start_tangents_.clear();
  r.goal_tangents_.clear();
  for (std::size_t k = 0; k < obs.size(); ++k) {
    for (auto& t : pointTangents(start, obs[k], k))
      if (!collidesWithOthers(t.from.point, t.to.point, obs, k, std::nullopt)) r.start_tangents_.push_back(t);
    for (auto& t : pointTangents(goal, obs[k], k))
      if (!collidesWithOthers(t.from.point, t.to.point, obs, k, std::nullopt)) r.goal_tangents_.push_back(t);
  }
  r.direct_ = start != goal && !segmentCollides(start, goal, obs);
  r.rebuild(nullptr);
  return r;
}

double kappaM(std::span<const InflatedObstacle> obstacles) {
  double km = 1.0;
  bool any = false;
  for (const auto& o : obstacles) {
    const double k = o.perimeter() / (4.0 * minInradius(o));
    km = any ? std::max(km, k) : k;
    any = true;
  }
  return km;
}

Roadmap ellipseFilter(const Roadmap& roadmap, std::optional<double> km) {
  if (!roadmap.start_ || !roadmap.goal_) return roadmap;
  const double k = km.value_or(kappaM(roadmap.obstacles_));
  const Vec2 p = *roadmap.start_, q = *roadmap.goal_;
  const double major = k * distance(p, q);
  const double tol = 1e-12 * std::max(1.0, major);
  std::vector<bool> mask(roadmap.anchor_count_, false);
  std::size_t removed = 0;
  for (std::size_t i = 0; i < roadmap.anchor_count_; ++i) {
    const Vec2 r = roadmap.nodes_[2 * i].point;
    mask[i] = distance(p, r) + distance(q, r) > major + tol;
    removed += mask[i] ? 1 : 0;
  }
  Roadmap out = roadmap;
  out.rebuild(&mask);
  logger().debug("ellipse filter: K_m = {:.6f}, removed {} of {} anchors", k, removed, roadmap.anchor_count_);
  return out;
}

Route shortestRoute(const Roadmap& roadmap) {
  const auto s = roadmap.startNode();
  const auto g = roadmap.goalNode();
  if (!s || !g) throw PlanError(ErrorKind::NoPath, "start and goal are not attached");
  if (*roadmap.start() == *roadmap.goal()) return {};

  const std::size_t n = roadmap.nodes().size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<double> dist(n, kInf);
  std::vector<std::size_t> hops(n, kNone), pred_edge(n, kNone), pred_node(n, kNone);
  std::vector<bool> done(n, false);
  using Key = std::tuple<double, std::size_t, std::size_t>;  // (distance, hops, node)
  std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
  dist[*s] = 0.0;
  hops[*s] = 0;
  queue.emplace(0.0, 0, *s);
  const auto edges = roadmap.edges();
  while (!queue.empty()) {
    const auto [d, h, v] = queue.top();
    queue.pop();
    if (done[v]) continue;
    done[v] = true;
    if (v == *g) break;
    for (std::size_t e : roadmap.outgoing(v)) {
      const std::size_t w = edges[e].to;
      if (done[w]) continue;
      const double nd = d + edges[e].length;
      const std::size_t nh = h + 1;
      if (std::tie(nd, nh, v) < std::tie(dist[w], hops[w], pred_node[w])) {
        dist[w] = nd;
        hops[w] = nh;
        pred_node[w] = v;
        pred_edge[w] = e;
        queue.emplace(nd, nh, w);
      }
    }
  }
  if (!done[*g]) throw PlanError(ErrorKind::NoPath, "goal is not reachable from start in the roadmap");
  Route route;
  route.length = dist[*g];
  for (std::size_t v = *g; v != *s; v = pred_node[v]) route.edges.push_back(pred_edge[v]);
  std::reverse(route.edges.begin(), route.edges.end());
  return route;
}

PlannedPath routeToPath(const Roadmap& roadmap, std::span<const std::size_t> route) {
  std::vector<PathSegment> segs;
  const auto nodes = roadmap.nodes();
  const auto edges = roadmap.edges();
  for (std::size_t e : route) {
    const RoadmapEdge& edge = edges[e];
    const RoadmapNode& a = nodes[edge.from];
    const RoadmapNode& b = nodes[edge.to];
    if (edge.kind == EdgeKind::Tangent) {
      segs.push_back(makeStraight(a.point, b.point));
    } else {
      appendBoundary(roadmap.obstacles()[*a.obstacle], *a.obstacle, a.gamma, edge.length, a.sense, segs);
    }
  }
  if (segs.empty() && roadmap.start()) segs.push_back(makeStraight(*roadmap.start(), *roadmap.start()));
  return PlannedPath(std::move(segs));
}

PlannedPath shortestPath(const Roadmap& roadmap) {
  const Route route = shortestRoute(roadmap);
  return routeToPath(roadmap, route.edges);
}

}  // namespace tgplan
