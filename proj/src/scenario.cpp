#include "dpp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace dpp {

namespace {

std::string vertex_str(const Vertex& v) {
  return "(" + std::to_string(v.col) + "," + std::to_string(v.row) + ")";
}

// Snapped endpoints must stay distinct and keep the required separation at rest, otherwise
// the instance is infeasible before anyone moves.
void check_snapped(const GridGraph& graph, const std::vector<AgentTask>& agents, double separation) {
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      const double ds = distance(graph.position(agents[i].start), graph.position(agents[j].start));
      const double dd = distance(graph.position(agents[i].dest), graph.position(agents[j].dest));
      if (ds < separation || dd < separation)
        throw InvalidArgument("snapped endpoints of agents " + std::to_string(i + 1) + " and " +
                              std::to_string(j + 1) +
                              " are closer than the separation; use a finer grid or a larger radius");
    }
  }
}

std::vector<AgentTask> circle_tasks(const GridGraph& graph, const Position& center, double radius, int n,
                                    const std::vector<double>& radii, double base = 0.0, double step = 0.0) {
  if (step == 0.0) step = 2.0 * std::numbers::pi / n;
  const auto& s = graph.spec();
  std::vector<AgentTask> tasks;
  for (int k = 0; k < n; ++k) {
    const double r = radii.empty() ? radius : radii[k];
    const double a = base + step * k;
    const Position from{center.x + r * std::cos(a), center.y + r * std::sin(a)};
    const Position to{center.x - r * std::cos(a), center.y - r * std::sin(a)};
    for (const auto& p : {from, to}) {
      if (p.x < 0.0 || p.y < 0.0 || p.x > s.world_width || p.y > s.world_height)
        throw InvalidArgument("superconflict circle does not fit in the workspace");
    }
    tasks.push_back(AgentTask{graph.nearest_vertex(from), graph.nearest_vertex(to), 0});
  }
  std::set<Vertex> starts, dests;
  for (const auto& t : tasks) {
    if (!starts.insert(t.start).second || !dests.insert(t.dest).second)
      throw InvalidArgument("two agents snap to the same vertex " + vertex_str(t.start) +
                            "; use a finer grid");
  }
  return tasks;
}

std::vector<AgentTask> reorder(const std::vector<AgentTask>& tasks, std::uint64_t seed) {
  const auto order = cluster_order(static_cast<int>(tasks.size()), seed);
  std::vector<AgentTask> out;
  for (int k : order) out.push_back(tasks[k]);
  return out;
}

Position workspace_center(const GridSpec& g) { return Position{g.world_width / 2, g.world_height / 2}; }

struct Cluster {
  Position center;
  double radius;
  int n_agents;
};

Scenario clusters_scenario(const GridSpec& grid, const std::vector<Cluster>& clusters, std::uint64_t seed,
                           const std::string& label) {
  const GridGraph graph(grid);
  Scenario sc;
  sc.grid = grid;
  sc.label = label;
  sc.seed = seed;
  for (std::size_t a = 0; a < clusters.size(); ++a) {
    for (std::size_t b = a + 1; b < clusters.size(); ++b) {
      const double gap = distance(clusters[a].center, clusters[b].center) - clusters[a].radius -
                         clusters[b].radius;
      if (gap < sc.separation)
        throw InvalidArgument("superconflict clusters " + std::to_string(a) + " and " + std::to_string(b) +
                              " overlap");
    }
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& cl = clusters[c];
    auto tasks = circle_tasks(graph, cl.center, cl.radius, cl.n_agents, {});
    // Decorrelate the per-cluster shuffles while keeping seed 0 the identity order.
    tasks = reorder(tasks, seed == 0 ? 0 : seed * 1000003ULL + c);
    for (auto& t : tasks) {
      t.cluster = static_cast<int>(c);
      sc.agents.push_back(t);
    }
  }
  check_snapped(graph, sc.agents, sc.separation);
  sc.validate();
  return sc;
}

}  // namespace

void Scenario::validate() const {
  grid.validate();
  const GridGraph graph(grid);
  std::set<Vertex> starts, dests;
  for (const auto& a : agents) {
    if (!graph.contains(a.start) || graph.is_blocked(a.start))
      throw InvalidArgument("agent start " + vertex_str(a.start) + " is not a free grid vertex");
    if (!graph.contains(a.dest) || graph.is_blocked(a.dest))
      throw InvalidArgument("agent dest " + vertex_str(a.dest) + " is not a free grid vertex");
    if (!starts.insert(a.start).second) throw InvalidArgument("two agents share start " + vertex_str(a.start));
    if (!dests.insert(a.dest).second) throw InvalidArgument("two agents share dest " + vertex_str(a.dest));
  }
  if (!(v_max > 0.0) || !(wait_duration > 0.0) || !(separation >= 0.0))
    throw InvalidArgument("scenario motion parameters out of range");
}

std::uint64_t uniform_index(ScenarioRng& rng, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("uniform_index over an empty range");
  const std::uint64_t limit = ScenarioRng::max() - ScenarioRng::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

std::vector<int> cluster_order(int n, std::uint64_t seed) {
  std::vector<int> order(n);
  for (int k = 0; k < n; ++k) order[k] = k;
  if (seed == 0) return order;
  ScenarioRng rng(seed);
  for (int k = n - 1; k > 0; --k) std::swap(order[k], order[uniform_index(rng, k + 1)]);
  return order;
}

GridSpec paper_superconflict_grid() { return GridSpec{60, 60, 20.0, 20.0, Connectivity::eight, {}}; }
GridSpec paper_random_grid() { return GridSpec{20, 20, 20.0, 20.0, Connectivity::four, {}}; }

Scenario gen_superconflict(const Position& center, double radius, int n_agents, const GridSpec& grid,
                           std::uint64_t seed) {
  if (n_agents < 1) throw InvalidArgument("superconflict needs at least one agent");
  if (!(radius > 0.0)) throw InvalidArgument("superconflict radius must be positive");
  return clusters_scenario(grid, {Cluster{center, radius, n_agents}}, seed,
                           "superconflict-" + std::to_string(n_agents));
}

Scenario gen_four_homogeneous(const GridSpec& grid, std::uint64_t seed, const ClusterGeometry& g) {
  const Position c = workspace_center(grid);
  const double o = g.offset;
  return clusters_scenario(grid,
                           {Cluster{{c.x - o, c.y - o}, g.radius, 8}, Cluster{{c.x + o, c.y - o}, g.radius, 8},
                            Cluster{{c.x - o, c.y + o}, g.radius, 8}, Cluster{{c.x + o, c.y + o}, g.radius, 8}},
                           seed, "four-homogeneous");
}

Scenario gen_four_heterogeneous(const GridSpec& grid, std::uint64_t seed, const ClusterGeometry& g) {
  const Position c = workspace_center(grid);
  const double o = g.offset;
  return clusters_scenario(grid,
                           {Cluster{{c.x - o, c.y - o}, g.wide_radius, 4},
                            Cluster{{c.x + o, c.y - o}, g.narrow_radius, 8},
                            Cluster{{c.x - o, c.y + o}, g.narrow_radius, 8},
                            Cluster{{c.x + o, c.y + o}, g.wide_radius, 4}},
                           seed, "four-heterogeneous");
}

Scenario gen_spiral(const GridSpec& grid, int n_agents, double r_min, double r_max, std::uint64_t seed) {
  if (n_agents < 2) throw InvalidArgument("spiral needs at least two agents");
  if (!(r_min > 0.0) || !(r_max > r_min)) throw InvalidArgument("spiral radii must satisfy 0 < r_min < r_max");
  const GridGraph graph(grid);
  std::vector<double> radii;
  for (int k = 0; k < n_agents; ++k) radii.push_back(r_min + k * (r_max - r_min) / (n_agents - 1));
  Scenario sc;
  sc.grid = grid;
  sc.label = "spiral-" + std::to_string(n_agents);
  sc.seed = seed;
  // Priority stays tied to the radius; the seed only turns the whole spiral.
  double base = 0.0;
  if (seed != 0) {
    ScenarioRng rng(seed);
    base = 2.0 * std::numbers::pi * static_cast<double>(uniform_index(rng, 3600)) / 3600.0;
  }
  sc.agents = circle_tasks(graph, workspace_center(grid), 0.0, n_agents, radii, base);
  check_snapped(graph, sc.agents, sc.separation);
  sc.validate();
  return sc;
}

Scenario gen_random(const GridSpec& grid, int n_agents, std::uint64_t seed, double min_distance,
                    double max_distance) {
  const GridGraph graph(grid);
  std::vector<int> free;
  for (int i = 0; i < graph.vertex_count(); ++i)
    if (!graph.is_blocked(graph.vertex_at(i))) free.push_back(i);
  if (n_agents < 0 || n_agents > static_cast<int>(free.size()))
    throw InvalidArgument("more agents than free vertices");

  ScenarioRng rng(seed);
  std::vector<int> unused_starts = free;
  std::vector<int> unused_dests = free;
  Scenario sc;
  sc.grid = grid;
  sc.label = "random-" + std::to_string(n_agents);
  sc.seed = seed;
  constexpr int kMaxTries = 10000;
  for (int a = 0; a < n_agents; ++a) {
    const auto si = uniform_index(rng, unused_starts.size());
    const int start = unused_starts[si];
    unused_starts.erase(unused_starts.begin() + static_cast<std::ptrdiff_t>(si));
    int tries = 0;
    while (true) {
      if (++tries > kMaxTries)
        throw InvalidArgument("random scenario: no destination in range for agent " + std::to_string(a + 1));
      const auto di = uniform_index(rng, unused_dests.size());
      const int dest = unused_dests[di];
      const double d = distance(graph.position(start), graph.position(dest));
      if (d > min_distance && d < max_distance) {
        unused_dests.erase(unused_dests.begin() + static_cast<std::ptrdiff_t>(di));
        sc.agents.push_back(AgentTask{graph.vertex_at(start), graph.vertex_at(dest), 0});
        break;
      }
    }
  }
  sc.validate();
  return sc;
}

Scenario gen_corridor(CorridorOrder order, CorridorWidth width) {
  // 7x3 grid at 1 m pitch; only the middle row is open, plus one pocket above column 5.
  GridSpec grid{7, 3, 6.0, 2.0, Connectivity::four, {}};
  for (int c = 0; c < 7; ++c) {
    grid.blocked.push_back(Vertex{c, 0});
    if (!(width == CorridorWidth::wide && c == 5)) grid.blocked.push_back(Vertex{c, 2});
  }
  const AgentTask left{Vertex{0, 1}, Vertex{6, 1}, 0};
  const AgentTask right{Vertex{6, 1}, Vertex{0, 1}, 0};
  Scenario sc;
  sc.grid = grid;
  sc.agents = order == CorridorOrder::agent1_first ? std::vector{left, right} : std::vector{right, left};
  sc.label = std::string("corridor-") + (width == CorridorWidth::wide ? "wide" : "narrow") +
             (order == CorridorOrder::agent1_first ? "-agent1-first" : "-agent2-first");
  sc.validate();
  return sc;
}

}  // namespace dpp
