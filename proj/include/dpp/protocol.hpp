#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpp/best_path.hpp"
#include "dpp/grid.hpp"
#include "dpp/scenario.hpp"
#include "dpp/trajectory.hpp"

namespace dpp {

enum class Algorithm { ca, sdpp, adpp, iadpp };

std::string to_string(Algorithm a);
/// Throws InvalidArgument for unknown names.
Algorithm algorithm_from_string(const std::string& s);

/// Raised when an agent receives a message that the protocol never sends (e.g. an inform
/// travelling upwards in priority).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Best-response oracle for every agent of one instance. Implementations must be safe to
/// call concurrently for different agents.
class Planner {
 public:
  virtual ~Planner() = default;
  virtual int agent_count() const = 0;
  virtual double separation() const = 0;
  /// `priority` is 1-based.
  virtual PlanResult plan(int priority, std::span<const Path> avoids,
                          const InterruptProbe& interrupt = {}) const = 0;
  /// Search horizon with no avoids, echoed in run reports.
  virtual double base_horizon() const { return 0.0; }
};

/// best_path() over the scenario's grid.
class GridPlanner final : public Planner {
 public:
  explicit GridPlanner(Scenario scenario);

  int agent_count() const override { return scenario_.size(); }
  double separation() const override { return scenario_.separation; }
  PlanResult plan(int priority, std::span<const Path> avoids,
                  const InterruptProbe& interrupt = {}) const override;
  double base_horizon() const override;

  const Scenario& scenario() const { return scenario_; }
  const GridGraph& graph() const { return graph_; }

 private:
  Scenario scenario_;
  GridGraph graph_;
};

enum class MessageKind {
  inform,      // carries a (possibly new) path or failure
  final_mark,  // only flips the sender's final flag; the path is unchanged
};

struct InformMessage {
  int sender = 0;
  Path payload;
  bool final = false;
  MessageKind kind = MessageKind::inform;
};

struct ViewEntry {
  Path path;
  bool final = false;
  std::uint64_t serial = 0;  // unique per stored update
};

/// Latest known path of every higher-priority agent.
class AgentView {
 public:
  /// Replaces the entry for `priority`. Returns true when the stored path content changed.
  bool update(int priority, Path path, bool final);
  void mark_final(int priority);

  const ViewEntry* find(int priority) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<int, ViewEntry>& entries() const { return entries_; }

  /// Paths in priority order; failed entries are kept as nulls.
  std::vector<Path> snapshot() const;

  /// Bumped whenever some stored path content changes.
  std::uint64_t revision() const { return revision_; }

 private:
  std::map<int, ViewEntry> entries_;
  std::uint64_t revision_ = 0;
  std::uint64_t next_serial_ = 1;
};

enum class Directive {
  none,     // nothing to do beyond the view update
  recheck,  // CheckFlag was raised; re-run the consistency check when idle
  restart,  // kill any running check and launch a fresh one now
};

/// Protocol state of one agent. Single owner: exactly one executor mutates it at a time.
class AgentState {
 public:
  AgentState(int priority, int n_agents, double separation);

  int priority() const { return priority_; }
  int agent_count() const { return n_agents_; }
  bool has_path() const { return has_path_; }
  const Path& path() const { return path_; }
  const AgentView& view() const { return view_; }
  bool check_flag() const { return check_flag_; }
  bool final_mark() const { return final_; }

  /// True when Path_i is unset, collides with some view entry, or is a failure while the
  /// view has changed since that failed attempt.
  bool needs_plan() const;

  /// Copy of the view to plan against; remembers its revision for adopt().
  std::vector<Path> snapshot_avoids();

  /// Installs the result of planning against the last snapshot. Throws once final.
  void adopt(Path path);

  Directive handle_inform(const InformMessage& msg, Algorithm mode);

  void clear_check_flag() { check_flag_ = false; }

  /// Evaluates the final-mark rule; returns true when the mark newly flips.
  bool update_final_mark();

  /// Outgoing broadcast after a check: the new path when `replanned`, else a bare final
  /// mark when the mark just flipped, else nothing.
  std::optional<InformMessage> settle(bool replanned);

  /// Priorities I+1..N.
  std::vector<int> recipients() const;

 private:
  int priority_;
  int n_agents_;
  double separation_;
  bool has_path_ = false;
  Path path_;
  AgentView view_;
  bool check_flag_ = false;
  bool final_ = false;
  std::uint64_t snapshot_revision_ = 0;
  std::uint64_t planned_revision_ = 0;
  // Conflict cache: priority -> (own path generation, entry serial) the verdict was computed for.
  struct Verdict {
    std::uint64_t generation = 0;
    std::uint64_t serial = 0;
    bool conflict = false;
  };
  mutable std::map<int, Verdict> verdicts_;
  std::uint64_t path_generation_ = 0;
};

struct ProtocolEffect {
  enum class Kind { planned, no_op };
  Kind kind = Kind::no_op;
  std::optional<InformMessage> broadcast;
  std::vector<int> recipients;
  std::size_t plan_expansions = 0;
  bool interrupted = false;
};

/// One synchronous consistency check: replan against a snapshot if needed, then settle.
/// An interrupted plan leaves the state untouched and reports interrupted = true.
ProtocolEffect check_consistency_and_plan(AgentState& state, const Planner& planner,
                                          const InterruptProbe& interrupt = {});

struct CaResult {
  SolutionSet solution;
  std::vector<std::size_t> expansions;
};

/// Centralized prioritized planning: agent i plans against the paths of agents 1..i-1.
CaResult ca_solve(const Planner& planner);

/// Per-agent optima with empty avoid sets.
CaResult ideal_solution(const Planner& planner);

}  // namespace dpp
