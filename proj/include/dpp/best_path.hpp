#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "dpp/grid.hpp"
#include "dpp/trajectory.hpp"

namespace dpp {

/// Polled once per expansion; returning true abandons the search.
using InterruptProbe = std::function<bool()>;

struct MotionParams {
  double v_max = 1.0;
  double wait_duration = 0.5;
  double separation = 0.8;
  // Non-positive means "use default_horizon()".
  double horizon = 0.0;
};

struct PlanningQuery {
  const GridGraph* graph = nullptr;
  Vertex start;
  Vertex dest;
  std::span<const Path> avoids;
  MotionParams motion;
};

struct PlanResult {
  Path path;  // null on failure or interruption
  std::size_t expansions = 0;
  bool interrupted = false;
  double horizon = 0.0;  // the horizon actually used
};

/// Admissible time-to-go: Euclidean distance over v_max.
double heuristic(const GridGraph& graph, const Vertex& v, const Vertex& dest, double v_max);

/// 4 x (workspace diagonal / v_max) + latest destination time among the avoids.
double default_horizon(const GridGraph& graph, std::span<const Path> avoids, double v_max);

/// Time-optimal space-time A* from start to dest that keeps `separation` from every avoid,
/// including while parked at dest afterwards. Failure (null path) when no such trajectory
/// reaches dest within the horizon.
PlanResult best_path(const PlanningQuery& query, const InterruptProbe& interrupt = {});

}  // namespace dpp
