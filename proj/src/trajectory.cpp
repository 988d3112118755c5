#include "dpp/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dpp {

namespace {

Position lerp(const Position& a, const Position& b, double s) {
  return Position{a.x + (b.x - a.x) * s, a.y + (b.y - a.y) * s};
}

/// Minimum of |d0 + (d1 - d0) s| over s in [0, 1], where d0 and d1 are relative offsets.
double min_linear(double d0x, double d0y, double d1x, double d1y) {
  const double wx = d1x - d0x;
  const double wy = d1y - d0y;
  const double ww = wx * wx + wy * wy;
  double s = 0.0;
  if (ww > 0.0) s = std::clamp(-(d0x * wx + d0y * wy) / ww, 0.0, 1.0);
  return std::hypot(d0x + wx * s, d0y + wy * s);
}

Position point_on(const Position& from, const Position& to, double t0, double t1, double t) {
  if (t1 <= t0) return to;
  return lerp(from, to, std::clamp((t - t0) / (t1 - t0), 0.0, 1.0));
}

// Walks the pieces of `other` overlapping [t0, t1] and reports the minimum distance to the
// query point moving linearly from `from` to `to`. An infinite t1 means the query is parked at
// `from` forever. Stops early once the running minimum drops below `stop_below`.
double walk_segment(const Position& from, const Position& to, double t0, double t1,
                    const Trajectory& other, double stop_below) {
  const auto& bp = other.breakpoints();
  const bool parked_query = std::isinf(t1);
  auto query_at = [&](double t) { return parked_query ? from : point_on(from, to, t0, t1, t); };

  double best = std::numeric_limits<double>::infinity();
  double t = t0;
  std::size_t i = other.piece_index(t0);
  while (true) {
    if (t >= other.dest_time()) {
      // `other` is static from here on; the query finishes its own motion at t1 at the latest.
      const Position& q = other.destination();
      const Position a0 = query_at(t);
      const Position a1 = parked_query ? from : to;
      return std::min(best, min_linear(a0.x - q.x, a0.y - q.y, a1.x - q.x, a1.y - q.y));
    }
    while (i + 1 < bp.size() && bp[i + 1].t <= t) ++i;
    const double end = std::min(bp[i + 1].t, t1);
    const Position o0 = other.position_at(t);
    const Position o1 = other.position_at(end);
    const Position a0 = query_at(t);
    const Position a1 = query_at(end);
    best = std::min(best, min_linear(a0.x - o0.x, a0.y - o0.y, a1.x - o1.x, a1.y - o1.y));
    if (best < stop_below || end >= t1) return best;
    t = end;
  }
}

double walk_pair(const Trajectory& a, const Trajectory& b, double stop_below) {
  const auto& ba = a.breakpoints();
  const auto& bb = b.breakpoints();
  const double horizon = std::max(a.dest_time(), b.dest_time());
  double best = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  std::size_t j = 0;
  double t = 0.0;
  Position pa = ba.front().pos;
  Position pb = bb.front().pos;
  while (t < horizon) {
    while (i + 1 < ba.size() && ba[i + 1].t <= t) ++i;
    while (j + 1 < bb.size() && bb[j + 1].t <= t) ++j;
    const double na = i + 1 < ba.size() ? ba[i + 1].t : horizon;
    const double nb = j + 1 < bb.size() ? bb[j + 1].t : horizon;
    const double next = std::min({na, nb, horizon});
    const Position qa = a.position_at(next);
    const Position qb = b.position_at(next);
    best = std::min(best, min_linear(pa.x - pb.x, pa.y - pb.y, qa.x - qb.x, qa.y - qb.y));
    if (best < stop_below) return best;
    t = next;
    pa = qa;
    pb = qb;
  }
  // Both are parked from `horizon` onwards.
  best = std::min(best, distance(a.destination(), b.destination()));
  return best;
}

}  // namespace

Trajectory::Trajectory(std::vector<Breakpoint> breakpoints) : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.empty()) throw InvalidArgument("trajectory needs at least one breakpoint");
  if (breakpoints_.front().t != 0.0) throw InvalidArgument("trajectory must start at t = 0");
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    const auto& b = breakpoints_[k];
    if (!std::isfinite(b.t) || !std::isfinite(b.pos.x) || !std::isfinite(b.pos.y))
      throw InvalidArgument("trajectory breakpoints must be finite");
    if (k > 0 && !(b.t > breakpoints_[k - 1].t))
      throw InvalidArgument("trajectory breakpoint times must strictly increase");
  }
}

std::size_t Trajectory::piece_index(double t) const {
  if (t <= 0.0) return 0;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t,
                             [](double v, const Breakpoint& b) { return v < b.t; });
  return static_cast<std::size_t>(std::distance(breakpoints_.begin(), it)) - 1;
}

Position Trajectory::position_at(double t) const {
  if (t < 0.0 || std::isnan(t)) throw InvalidArgument("trajectory queried at negative time");
  if (t >= dest_time()) return destination();
  const std::size_t i = piece_index(t);
  const auto& a = breakpoints_[i];
  const auto& b = breakpoints_[i + 1];
  return lerp(a.pos, b.pos, (t - a.t) / (b.t - a.t));
}

double Trajectory::max_speed() const {
  double v = 0.0;
  for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
    const auto& a = breakpoints_[k - 1];
    const auto& b = breakpoints_[k];
    v = std::max(v, distance(a.pos, b.pos) / (b.t - a.t));
  }
  return v;
}

double min_distance_on_segment(const Position& from, const Position& to, double t0, double t1,
                               const Trajectory& other) {
  return walk_segment(from, to, t0, t1, other, -1.0);
}

double min_distance_parked(const Position& p, double t0, const Trajectory& other) {
  return walk_segment(p, p, t0, std::numeric_limits<double>::infinity(), other, -1.0);
}

bool segment_clear(const Position& from, const Position& to, double t0, double t1,
                   const Trajectory& other, double separation) {
  return !(walk_segment(from, to, t0, t1, other, separation) < separation);
}

bool parked_clear(const Position& p, double t0, const Trajectory& other, double separation) {
  return !(walk_segment(p, p, t0, std::numeric_limits<double>::infinity(), other, separation) <
           separation);
}

double min_distance(const Trajectory& a, const Trajectory& b) { return walk_pair(a, b, -1.0); }

bool in_conflict(const Trajectory& a, const Trajectory& b, double separation) {
  return walk_pair(a, b, separation) < separation;
}

bool in_conflict(const Trajectory& a, const Trajectory& b, const CollisionParams& params) {
  return in_conflict(a, b, params.separation);
}

bool has_failure(const SolutionSet& solution) {
  return std::any_of(solution.begin(), solution.end(), [](const Path& p) { return !p; });
}

double dur(const SolutionSet& solution) {
  double total = 0.0;
  for (const auto& p : solution) {
    if (!p) throw InvalidArgument("dur() is undefined for a solution with failed agents");
    total += p->dest_time();
  }
  return total;
}

double cost(const SolutionSet& solution, const SolutionSet& ideal) {
  const double base = dur(ideal);
  if (!(base > 0.0)) throw InvalidArgument("cost() needs an ideal solution with positive duration");
  const double d = dur(solution);
  if (d == base) return 0.0;
  return (d - base) / base;
}

std::pair<int, int> first_conflict(const SolutionSet& solution, double separation) {
  const int n = static_cast<int>(solution.size());
  for (int i = 0; i < n; ++i) {
    if (!solution[i]) continue;
    for (int j = i + 1; j < n; ++j) {
      if (!solution[j]) continue;
      if (in_conflict(*solution[i], *solution[j], separation)) return {i, j};
    }
  }
  return {-1, -1};
}

}  // namespace dpp
