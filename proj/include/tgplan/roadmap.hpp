#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tgplan/geometry.hpp"
#include "tgplan/path.hpp"
#include "tgplan/tangents.hpp"

namespace tgplan {

enum class NodeRole { Anchor, Start, Goal };

/// Graph node. Anchors carry the sense in which the boundary is traversed
/// through them; every anchor appears once per sense.
struct RoadmapNode {
  NodeRole role = NodeRole::Anchor;
  std::optional<std::size_t> obstacle;
  double gamma = 0.0;
  Vec2 point;
  Sense sense = Sense::Ccw;
};

enum class EdgeKind { Tangent, Arc };

struct RoadmapEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double length = 0.0;
  EdgeKind kind = EdgeKind::Tangent;
  TangentKind tangent_kind = TangentKind::External;  // meaningful for tangent edges
};

/// Directed tangent graph over a fixed obstacle set.
///
/// Node ids are stable: 2*anchor + (0 for ccw, 1 for cw), anchors sorted by
/// (obstacle, gamma), followed by the start and goal nodes when attached.
/// Filtered nodes keep their ids but lose all incident edges.
class Roadmap {
 public:
  Roadmap() = default;

  std::span<const InflatedObstacle> obstacles() const { return obstacles_; }
  std::span<const RoadmapNode> nodes() const { return nodes_; }
  std::span<const RoadmapEdge> edges() const { return edges_; }
  /// Indices into edges() leaving `node`, in increasing edge order.
  std::span<const std::size_t> outgoing(std::size_t node) const { return out_[node]; }

  bool isActive(std::size_t node) const { return !excluded_[node]; }
  std::size_t activeNodeCount() const;
  std::size_t anchorCount() const { return anchor_count_; }

  std::optional<std::size_t> startNode() const;
  std::optional<std::size_t> goalNode() const;
  std::optional<Vec2> start() const { return start_; }
  std::optional<Vec2> goal() const { return goal_; }

  /// Obstacle-pair tangents that survived collision pruning.
  std::span<const TangentEdge> pairTangents() const { return pair_tangents_; }

 private:
  friend Roadmap buildRoadmap(std::vector<InflatedObstacle> obstacles);
  friend Roadmap attachTerminals(const Roadmap& roadmap, const Vec2& start, const Vec2& goal);
  friend Roadmap ellipseFilter(const Roadmap& roadmap, std::optional<double> km);

  void rebuild(const std::vector<bool>* anchor_excluded);

  std::vector<InflatedObstacle> obstacles_;
  std::vector<TangentEdge> pair_tangents_;
  std::vector<TangentEdge> start_tangents_;  // start -> boundary
  std::vector<TangentEdge> goal_tangents_;   // boundary -> goal
  bool direct_ = false;
  std::optional<Vec2> start_, goal_;

  std::size_t anchor_count_ = 0;
  std::vector<RoadmapNode> nodes_;
  std::vector<RoadmapEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<bool> excluded_;
};

/// Tangent graph of pairwise common tangents and boundary arcs.
Roadmap buildRoadmap(std::vector<InflatedObstacle> obstacles);

/// Adds start/goal nodes, their tangents to every obstacle, and the direct edge when free.
Roadmap attachTerminals(const Roadmap& roadmap, const Vec2& start, const Vec2& goal);

/// max over obstacles of perimeter / (4 * minimum inradius); 1 for no obstacles.
double kappaM(std::span<const InflatedObstacle> obstacles);

/// Drops anchors outside the closed ellipse with foci at start and goal and
/// major axis km * |goal - start|. `km` defaults to kappaM of the obstacles.
Roadmap ellipseFilter(const Roadmap& roadmap, std::optional<double> km = std::nullopt);

/// Shortest route as edge indices, with its total length.
struct Route {
  std::vector<std::size_t> edges;
  double length = 0.0;
};

/// Dijkstra from start to goal. Ties are broken by fewer edges, then by
/// smaller predecessor id. Throws `ErrorKind::NoPath`.
Route shortestRoute(const Roadmap& roadmap);

/// Builds the geometric path along a chain of edges starting at the start node.
PlannedPath routeToPath(const Roadmap& roadmap, std::span<const std::size_t> edges);

/// Shortest path from the attached start to the attached goal.
PlannedPath shortestPath(const Roadmap& roadmap);

}  // namespace tgplan
