#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpp/protocol.hpp"

namespace dpp {

/// How simulated time is charged for agent computation.
struct CostModel {
  enum class Mode { deterministic, measured };

  Mode mode = Mode::deterministic;
  double t_expand = 10e-6;  // seconds per planner expansion (deterministic mode)
  double t_handler = 1e-6;  // seconds per consistency check that does not replan
  // Optional fixed planning duration per agent (index = priority - 1); overrides both modes.
  std::vector<double> plan_cost;

  double plan_duration(int priority, std::size_t expansions, double measured_seconds) const;
  void validate() const;
};

std::string to_string(CostModel::Mode m);
CostModel::Mode cost_mode_from_string(const std::string& s);

struct SimConfig {
  CostModel cost;
  std::uint64_t seed = 0;
  std::size_t max_events = 20'000'000;
};

/// One busy interval of one agent (a box in a sequence diagram).
struct ScheduleEntry {
  int agent = 0;
  double start = 0.0;
  double end = 0.0;
  std::string activity;  // "plan", "check" or "plan-interrupted"
  int iteration = 0;     // SDPP iteration, 0 otherwise
};

/// One point-to-point message. Sender 0 is the central solver of the CA accounting.
struct TraceRecord {
  double time = 0.0;
  int sender = 0;
  int recipient = 0;
  bool final = false;
  MessageKind kind = MessageKind::inform;
  std::uint64_t payload_hash = 0;
};

struct RunReport {
  Algorithm algorithm = Algorithm::ca;
  std::string scenario;
  int n_agents = 0;
  double wallclock = 0.0;     // simulated makespan of agent computation
  std::size_t messages = 0;   // point-to-point informs
  double dur = 0.0;           // NaN when failed
  double cost = 0.0;          // NaN when failed
  bool failed = false;
  std::vector<std::size_t> expansions;  // per agent, including interrupted work
  std::vector<std::size_t> broadcasts;  // per agent, path-carrying broadcasts
  std::size_t plans = 0;
  int iterations = 0;          // SDPP
  std::size_t restarts = 0;    // IADPP
  std::size_t events = 0;
  double termination_time = 0.0;  // when agent N's final mark flipped
  bool termination_agrees = true; // no agent activity after termination_time
  // Config echo.
  std::uint64_t seed = 0;
  CostModel cost_model;
  double horizon_base = 0.0;
};

struct RunResult {
  RunReport report;
  SolutionSet solution;
  std::vector<ScheduleEntry> schedule;
  std::vector<TraceRecord> trace;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs SDPP, ADPP or IADPP on n simulated processors with zero communication delay.
/// `ideal` (per-agent unconstrained optima) is computed when not supplied.
RunResult simulate(const Planner& planner, Algorithm algorithm, const SimConfig& config,
                   const SolutionSet* ideal = nullptr);

/// Centralized baseline: sequential planning time, 2n messages.
RunResult run_ca_analytic(const Planner& planner, const SimConfig& config, const SolutionSet* ideal = nullptr);

/// Dispatches to run_ca_analytic() or simulate().
RunResult run_algorithm(const Planner& planner, Algorithm algorithm, const SimConfig& config,
                        const SolutionSet* ideal = nullptr);

/// Number of point-to-point inform deliveries in a trace.
std::size_t count_messages(const std::vector<TraceRecord>& trace);

/// Stable FNV-1a hash of a path's breakpoints; 0 for a failed path.
std::uint64_t payload_hash(const Path& path);

}  // namespace dpp
