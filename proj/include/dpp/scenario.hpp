#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dpp/best_path.hpp"
#include "dpp/grid.hpp"

namespace dpp {

struct AgentTask {
  Vertex start;
  Vertex dest;
  int cluster = 0;

  friend bool operator==(const AgentTask&, const AgentTask&) = default;
};

/// A cooperative pathfinding instance. Agent order is priority order (index 0 = priority 1).
struct Scenario {
  GridSpec grid;
  std::vector<AgentTask> agents;
  double v_max = 1.0;
  double wait_duration = 0.5;
  double separation = 0.8;
  std::string label;
  std::uint64_t seed = 0;
  std::string prng = "mt19937_64";

  int size() const { return static_cast<int>(agents.size()); }
  MotionParams motion() const { return MotionParams{v_max, wait_duration, separation, 0.0}; }

  /// Throws InvalidArgument on out-of-grid endpoints or shared starts/destinations.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// The scenario PRNG. std::mt19937_64 is specified bit-for-bit by the standard; draws go
/// through uniform_index() rather than <random> distributions, which are not portable.
using ScenarioRng = std::mt19937_64;

/// Unbiased draw from [0, n).
std::uint64_t uniform_index(ScenarioRng& rng, std::uint64_t n);

/// Priority order within a cluster: identity for seed 0, otherwise a seeded shuffle.
std::vector<int> cluster_order(int n, std::uint64_t seed);

GridSpec paper_superconflict_grid();  // 60x60 eight-connected over 20 m x 20 m
GridSpec paper_random_grid();         // 20x20 four-connected over 20 m x 20 m

Scenario gen_superconflict(const Position& center, double radius, int n_agents, const GridSpec& grid,
                           std::uint64_t seed = 0);

struct ClusterGeometry {
  double offset = 5.0;        // quadrant centers at workspace center +- offset
  double radius = 2.0;        // homogeneous clusters
  double wide_radius = 4.0;   // heterogeneous: the four-agent clusters
  double narrow_radius = 2.0; // heterogeneous: the eight-agent clusters
};

Scenario gen_four_homogeneous(const GridSpec& grid, std::uint64_t seed = 0,
                              const ClusterGeometry& geometry = {});
Scenario gen_four_heterogeneous(const GridSpec& grid, std::uint64_t seed = 0,
                                const ClusterGeometry& geometry = {});

/// Agent k starts at radius r_min + k (r_max - r_min) / (n - 1) and angle base + 2 pi k / n, with
/// the destination diametrically opposite. Priority 1 is innermost; the seed picks the base angle.
Scenario gen_spiral(const GridSpec& grid, int n_agents = 8, double r_min = 2.0, double r_max = 6.0,
                    std::uint64_t seed = 0);

Scenario gen_random(const GridSpec& grid, int n_agents, std::uint64_t seed, double min_distance = 5.0,
                    double max_distance = 10.0);

enum class CorridorOrder { agent1_first, agent2_first };
enum class CorridorWidth { narrow, wide };

/// Two agents swapping ends of a one-lane corridor; the wide variant adds a side pocket
/// next to agent 2's start.
Scenario gen_corridor(CorridorOrder order, CorridorWidth width);

}  // namespace dpp
