#include "dpp/best_path.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <unordered_set>
#include <vector>

namespace dpp {

namespace {

// Axis-aligned box around everything an avoid ever touches, used to skip far obstacles.
struct Obstacle {
  const Trajectory* traj = nullptr;
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
};

Obstacle make_obstacle(const Trajectory& t) {
  Obstacle o{&t, t.start().x, t.start().x, t.start().y, t.start().y};
  for (const auto& b : t.breakpoints()) {
    o.min_x = std::min(o.min_x, b.pos.x);
    o.max_x = std::max(o.max_x, b.pos.x);
    o.min_y = std::min(o.min_y, b.pos.y);
    o.max_y = std::max(o.max_y, b.pos.y);
  }
  return o;
}

bool boxes_apart(const Obstacle& o, const Position& a, const Position& b, double sep) {
  const double lx = std::min(a.x, b.x), hx = std::max(a.x, b.x);
  const double ly = std::min(a.y, b.y), hy = std::max(a.y, b.y);
  const double dx = std::max({0.0, o.min_x - hx, lx - o.max_x});
  const double dy = std::max({0.0, o.min_y - hy, ly - o.max_y});
  return dx * dx + dy * dy >= sep * sep;
}

struct Node {
  int vertex;
  double t;
  int parent;
};

struct OpenItem {
  double f;
  double g;
  Vertex v;
  int node;
};

// Pops smallest f; ties prefer larger g, then smaller (row, col), then insertion order.
struct Worse {
  bool operator()(const OpenItem& a, const OpenItem& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    if (a.v != b.v) return a.v > b.v;
    return a.node > b.node;
  }
};

std::uint64_t state_key(int vertex, double t) {
  const auto bucket = static_cast<std::uint64_t>(std::llround(t * 1e6));
  return (static_cast<std::uint64_t>(vertex) << 40) | bucket;
}

void validate(const PlanningQuery& q) {
  if (q.graph == nullptr) throw InvalidArgument("planning query without a graph");
  const auto& g = *q.graph;
  if (!g.contains(q.start) || g.is_blocked(q.start)) throw InvalidArgument("start vertex not in graph");
  if (!g.contains(q.dest) || g.is_blocked(q.dest)) throw InvalidArgument("dest vertex not in graph");
  if (!(q.motion.v_max > 0.0)) throw InvalidArgument("v_max must be positive");
  if (!(q.motion.wait_duration > 0.0)) throw InvalidArgument("wait duration must be positive");
  if (!(q.motion.separation >= 0.0)) throw InvalidArgument("separation must be non-negative");
}

}  // namespace

double heuristic(const GridGraph& graph, const Vertex& v, const Vertex& dest, double v_max) {
  return distance(graph.position(v), graph.position(dest)) / v_max;
}

double default_horizon(const GridGraph& graph, std::span<const Path> avoids, double v_max) {
  const auto& s = graph.spec();
  double latest = 0.0;
  for (const auto& a : avoids)
    if (a) latest = std::max(latest, a->dest_time());
  return 4.0 * std::hypot(s.world_width, s.world_height) / v_max + latest;
}

PlanResult best_path(const PlanningQuery& query, const InterruptProbe& interrupt) {
  validate(query);
  const GridGraph& graph = *query.graph;
  const MotionParams& m = query.motion;
  const double sep = m.separation;

  PlanResult result;
  result.horizon = m.horizon > 0.0 ? m.horizon : default_horizon(graph, query.avoids, m.v_max);

  std::vector<Obstacle> obstacles;
  obstacles.reserve(query.avoids.size());
  for (const auto& a : query.avoids)
    if (a) obstacles.push_back(make_obstacle(*a));

  auto motion_clear = [&](const Position& a, const Position& b, double t0, double t1) {
    for (const auto& o : obstacles) {
      if (boxes_apart(o, a, b, sep)) continue;
      if (!segment_clear(a, b, t0, t1, *o.traj, sep)) return false;
    }
    return true;
  };
  auto parking_clear = [&](const Position& p, double t0) {
    for (const auto& o : obstacles) {
      if (boxes_apart(o, p, p, sep)) continue;
      if (!parked_clear(p, t0, *o.traj, sep)) return false;
    }
    return true;
  };

  const int dest_index = graph.index_of(query.dest);
  const Position& dest_pos = graph.position(dest_index);
  auto h = [&](int idx) { return distance(graph.position(idx), dest_pos) / m.v_max; };

  std::vector<Node> nodes;
  std::priority_queue<OpenItem, std::vector<OpenItem>, Worse> open;
  std::unordered_set<std::uint64_t> seen;

  const int start_index = graph.index_of(query.start);
  nodes.push_back(Node{start_index, 0.0, -1});
  seen.insert(state_key(start_index, 0.0));
  open.push(OpenItem{h(start_index), 0.0, query.start, 0});

  // States are keyed by (vertex, time); g equals time, so the first arrival is as good as any.
  auto try_push = [&](int vertex, const Position& from, double t0, double t, int parent) {
    if (t > result.horizon) return;
    const std::uint64_t key = state_key(vertex, t);
    if (seen.contains(key)) return;
    if (!motion_clear(from, graph.position(vertex), t0, t)) return;
    seen.insert(key);
    nodes.push_back(Node{vertex, t, parent});
    open.push(OpenItem{t + h(vertex), t, graph.vertex_at(vertex), static_cast<int>(nodes.size()) - 1});
  };

  while (!open.empty()) {
    if (interrupt && interrupt()) {
      result.interrupted = true;
      return result;
    }
    const OpenItem item = open.top();
    open.pop();
    ++result.expansions;
    const Node cur = nodes[item.node];
    const Position& here = graph.position(cur.vertex);

    if (cur.vertex == dest_index && parking_clear(here, cur.t)) {
      std::vector<Breakpoint> bps;
      for (int k = item.node; k >= 0; k = nodes[k].parent)
        bps.push_back(Breakpoint{nodes[k].t, graph.position(nodes[k].vertex)});
      std::reverse(bps.begin(), bps.end());
      result.path = std::make_shared<const Trajectory>(std::move(bps));
      return result;
    }

    try_push(cur.vertex, here, cur.t, cur.t + m.wait_duration, item.node);
    for (const auto& e : graph.edges(cur.vertex))
      try_push(e.to, here, cur.t, cur.t + e.length / m.v_max, item.node);
  }
  return result;
}

}  // namespace dpp
