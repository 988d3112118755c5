#pragma once

#include <memory>
#include <vector>

#include "dpp/grid.hpp"

namespace dpp {

struct Breakpoint {
  double t = 0.0;
  Position pos;

  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Piecewise-linear space-time trajectory. Starts at t = 0, ends at dest_time()
/// and stays parked at its last position forever after.
class Trajectory {
 public:
  /// Throws InvalidArgument unless the breakpoints start at t = 0 and strictly increase.
  explicit Trajectory(std::vector<Breakpoint> breakpoints);

  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
  double dest_time() const { return breakpoints_.back().t; }
  const Position& start() const { return breakpoints_.front().pos; }
  const Position& destination() const { return breakpoints_.back().pos; }

  Position position_at(double t) const;

  /// Index of the piece containing t: breakpoints_[i].t <= t < breakpoints_[i+1].t,
  /// clamped to the last breakpoint once the trajectory is parked.
  std::size_t piece_index(double t) const;

  /// Largest speed implied by any piece.
  double max_speed() const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::vector<Breakpoint> breakpoints_;
};

/// A planned path or failure. A null pointer is the failed (empty) plan.
using Path = std::shared_ptr<const Trajectory>;

struct CollisionParams {
  double separation = 0.8;
  double check_resolution = 1e-3;
};

/// Minimum distance between a point moving linearly from `from` (at t0) to `to` (at t1)
/// and `other` over the window [t0, t1].
double min_distance_on_segment(const Position& from, const Position& to, double t0, double t1,
                               const Trajectory& other);

/// Minimum distance between a point parked at `p` from time t0 onwards and `other`.
double min_distance_parked(const Position& p, double t0, const Trajectory& other);

/// Early-exit forms of the two queries above: true iff the minimum distance is >= separation.
bool segment_clear(const Position& from, const Position& to, double t0, double t1,
                   const Trajectory& other, double separation);
bool parked_clear(const Position& p, double t0, const Trajectory& other, double separation);

/// Minimum distance between two trajectories over [0, infinity).
double min_distance(const Trajectory& a, const Trajectory& b);

/// True iff the trajectories come strictly closer than params.separation at some t >= 0.
bool in_conflict(const Trajectory& a, const Trajectory& b, const CollisionParams& params);
bool in_conflict(const Trajectory& a, const Trajectory& b, double separation);

/// Per-agent entries indexed by priority - 1. Null entries are failures.
using SolutionSet = std::vector<Path>;

bool has_failure(const SolutionSet& solution);

/// Sum of destination times. Throws InvalidArgument if any entry failed.
double dur(const SolutionSet& solution);

/// Relative prolongation of `solution` over the collision-ignoring optimum `ideal`.
double cost(const SolutionSet& solution, const SolutionSet& ideal);

/// Pairwise separation check over all agents; returns the first conflicting pair, or
/// {-1, -1} when the set is collision-free. Failed entries are skipped.
std::pair<int, int> first_conflict(const SolutionSet& solution, double separation);

}  // namespace dpp
