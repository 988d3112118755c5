#include "dpp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dpp {

std::string to_string(Connectivity c) { return c == Connectivity::four ? "four" : "eight"; }

Connectivity connectivity_from_string(const std::string& s) {
  if (s == "four" || s == "4") return Connectivity::four;
  if (s == "eight" || s == "8") return Connectivity::eight;
  throw InvalidArgument("unknown connectivity '" + s + "'");
}

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void GridSpec::validate() const {
  if (width_cells < 2 || height_cells < 2)
    throw InvalidArgument("grid needs at least 2x2 vertices, got " + std::to_string(width_cells) + "x" +
                          std::to_string(height_cells));
  if (!(world_width > 0.0) || !(world_height > 0.0) || !std::isfinite(world_width) ||
      !std::isfinite(world_height))
    throw InvalidArgument("world dimensions must be positive and finite");
  for (const auto& b : blocked) {
    if (b.col < 0 || b.col >= width_cells || b.row < 0 || b.row >= height_cells)
      throw InvalidArgument("blocked vertex outside the grid");
  }
}

GridGraph::GridGraph(GridSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const int n = vertex_count();
  blocked_.assign(n, 0);
  for (const auto& b : spec_.blocked) blocked_[index_of(b)] = 1;

  positions_.resize(n);
  const double px = spec_.pitch_x();
  const double py = spec_.pitch_y();
  for (int i = 0; i < n; ++i) {
    const Vertex v = vertex_at(i);
    // Pin the far boundary exactly so that embedded coordinates never leave the workspace.
    const double x = v.col == spec_.width_cells - 1 ? spec_.world_width : v.col * px;
    const double y = v.row == spec_.height_cells - 1 ? spec_.world_height : v.row * py;
    positions_[i] = Position{x, y};
  }

  adjacency_.resize(n);
  for (int i = 0; i < n; ++i) {
    if (blocked_[i]) continue;
    const Vertex v = vertex_at(i);
    // Row-major scan of the 3x3 block yields targets already sorted by (row, col).
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        if (spec_.connectivity == Connectivity::four && dr != 0 && dc != 0) continue;
        const Vertex u{v.col + dc, v.row + dr};
        if (!contains(u) || blocked_[index_of(u)]) continue;
        const int j = index_of(u);
        adjacency_[i].push_back(Edge{j, distance(positions_[i], positions_[j])});
      }
    }
  }
}

std::size_t GridGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& a : adjacency_) total += a.size();
  return total;
}

bool GridGraph::contains(const Vertex& v) const {
  return v.col >= 0 && v.col < spec_.width_cells && v.row >= 0 && v.row < spec_.height_cells;
}

bool GridGraph::is_blocked(const Vertex& v) const { return contains(v) && blocked_[index_of(v)] != 0; }

void GridGraph::require(const Vertex& v) const {
  if (!contains(v))
    throw InvalidArgument("vertex (" + std::to_string(v.col) + "," + std::to_string(v.row) +
                          ") is outside the grid");
}

Position GridGraph::position(const Vertex& v) const {
  require(v);
  return positions_[index_of(v)];
}

std::vector<Neighbor> GridGraph::neighbors(const Vertex& v) const {
  require(v);
  std::vector<Neighbor> out;
  for (const auto& e : adjacency_[index_of(v)]) out.push_back(Neighbor{vertex_at(e.to), e.length});
  return out;
}

Vertex GridGraph::nearest_vertex(const Position& p) const {
  constexpr double eps = 1e-9;
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < -eps || p.y < -eps ||
      p.x > spec_.world_width + eps || p.y > spec_.world_height + eps)
    throw InvalidArgument("position outside the workspace");

  const double tie = 1e-12 * std::max(spec_.world_width, spec_.world_height);
  double best = std::numeric_limits<double>::infinity();
  int best_index = -1;
  // Indices are visited in (row, col) order, so a strict improvement test keeps the smaller
  // vertex on ties.
  for (int i = 0; i < vertex_count(); ++i) {
    if (blocked_[i]) continue;
    const double d = distance(positions_[i], p);
    if (d < best - tie) {
      best = d;
      best_index = i;
    }
  }
  if (best_index < 0) throw InvalidArgument("grid has no free vertex");
  return vertex_at(best_index);
}

GridGraph build_grid(const GridSpec& spec) { return GridGraph(spec); }

}  // namespace dpp
