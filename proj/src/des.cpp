#include "dpp/des.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <queue>

namespace dpp {

double CostModel::plan_duration(int priority, std::size_t expansions, double measured_seconds) const {
  if (!plan_cost.empty()) return plan_cost.at(static_cast<std::size_t>(priority - 1));
  if (mode == Mode::measured) return measured_seconds;
  return static_cast<double>(expansions) * t_expand;
}

void CostModel::validate() const {
  if (!(t_expand > 0.0)) throw InvalidArgument("t_expand must be positive");
  if (!(t_handler >= 0.0)) throw InvalidArgument("t_handler must be non-negative");
  for (double c : plan_cost)
    if (!(c > 0.0)) throw InvalidArgument("fixed planning costs must be positive");
}

std::string to_string(CostModel::Mode m) {
  return m == CostModel::Mode::deterministic ? "deterministic" : "measured";
}

CostModel::Mode cost_mode_from_string(const std::string& s) {
  if (s == "deterministic") return CostModel::Mode::deterministic;
  if (s == "measured") return CostModel::Mode::measured;
  throw InvalidArgument("unknown cost model '" + s + "' (expected deterministic|measured)");
}

std::uint64_t payload_hash(const Path& path) {
  if (!path) return 0;
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& b : path->breakpoints()) {
    mix(b.t);
    mix(b.pos.x);
    mix(b.pos.y);
  }
  return h == 0 ? 1 : h;
}

std::size_t count_messages(const std::vector<TraceRecord>& trace) {
  std::size_t n = 0;
  for (const auto& r : trace)
    if (r.kind == MessageKind::inform) ++n;
  return n;
}

namespace {

enum class EventKind { completion, delivery, resume, barrier_release };

// Same-time ordering: completions, then deliveries, then decisions about what to run next,
// so an agent sees every message sent at time t before it picks its next check.
int phase_of(EventKind k) {
  switch (k) {
    case EventKind::completion: return 0;
    case EventKind::delivery: return 1;
    default: return 2;
  }
}

struct Event {
  double time;
  int phase;
  int agent;
  std::uint64_t seq;
  EventKind kind;
  std::uint64_t token;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.phase != b.phase) return a.phase > b.phase;
    if (a.agent != b.agent) return a.agent > b.agent;
    return a.seq > b.seq;
  }
};

struct Proc {
  explicit Proc(AgentState s) : state(std::move(s)) {}
  AgentState state;
  bool busy = false;
  bool resume_pending = false;
  std::uint64_t generation = 0;
  bool pending_plan = false;
  PlanResult pending;
  double busy_since = 0.0;
  std::size_t schedule_index = 0;
  std::size_t expansions = 0;
  std::size_t broadcasts = 0;
};

class Simulator {
 public:
  Simulator(const Planner& planner, Algorithm algorithm, const SimConfig& config)
      : planner_(planner), algorithm_(algorithm), config_(config), n_(planner.agent_count()) {
    for (int i = 1; i <= n_; ++i) procs_.emplace_back(AgentState(i, n_, planner.separation()));
  }

  RunResult run() {
    RunResult out;
    if (n_ == 0) {
      finish(out);
      return out;
    }
    if (algorithm_ == Algorithm::sdpp) iteration_ = 1;
    for (int i = 1; i <= n_; ++i) {
      if (algorithm_ == Algorithm::sdpp) {
        start_or_arrive(i, 0.0);
      } else {
        start_check(i, 0.0);
      }
    }
    while (!queue_.empty()) {
      if (++events_ > config_.max_events) livelock();
      const Event ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      switch (ev.kind) {
        case EventKind::completion: on_completion(ev); break;
        case EventKind::delivery: on_delivery(ev); break;
        case EventKind::resume: on_resume(ev.agent); break;
        case EventKind::barrier_release: on_barrier(); break;
      }
      if (stopped_) break;
    }
    finish(out);
    return out;
  }

 private:
  Proc& proc(int i) { return procs_[static_cast<std::size_t>(i - 1)]; }

  void push(double t, int agent, EventKind kind, std::uint64_t token) {
    queue_.push(Event{t, phase_of(kind), agent, seq_++, kind, token});
  }

  void start_check(int i, double t) {
    Proc& p = proc(i);
    if (p.busy || p.state.final_mark()) return;
    double duration = config_.cost.t_handler;
    p.pending_plan = p.state.needs_plan();
    if (p.pending_plan) {
      const auto avoids = p.state.snapshot_avoids();
      const auto t0 = std::chrono::steady_clock::now();
      p.pending = planner_.plan(i, avoids);
      const double measured = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      duration = config_.cost.plan_duration(i, p.pending.expansions, measured);
    }
    p.busy = true;
    p.busy_since = t;
    ++p.generation;
    p.schedule_index = schedule_.size();
    schedule_.push_back(ScheduleEntry{i, t, t + duration, p.pending_plan ? "plan" : "check", iteration_});
    push(t + duration, i, EventKind::completion, p.generation);
  }

  void start_or_arrive(int i, double t) {
    Proc& p = proc(i);
    if (p.state.final_mark()) {
      arrive(t);
    } else {
      start_check(i, t);
    }
  }

  void broadcast(int i, const InformMessage& msg) {
    Proc& p = proc(i);
    if (msg.kind == MessageKind::inform) ++p.broadcasts;
    const std::uint64_t hash = payload_hash(msg.payload);
    for (int j = i + 1; j <= n_; ++j) {
      trace_.push_back(TraceRecord{now_, i, j, msg.final, msg.kind, hash});
      messages_.push_back(msg);
      push(now_, j, EventKind::delivery, messages_.size() - 1);
    }
    if (msg.final) note_final(i);
  }

  void note_final(int i) {
    if (i == n_ && !terminated_) {
      terminated_ = true;
      termination_time_ = now_;
    }
  }

  void on_completion(const Event& ev) {
    Proc& p = proc(ev.agent);
    if (!p.busy || ev.token != p.generation) return;  // cancelled by a restart
    p.busy = false;
    last_activity_ = std::max(last_activity_, now_);
    if (terminated_) late_activity_ = true;
    std::optional<InformMessage> msg;
    if (p.pending_plan) {
      ++plans_;
      p.expansions += p.pending.expansions;
      p.state.adopt(std::move(p.pending.path));
      msg = p.state.settle(true);
    } else {
      msg = p.state.settle(false);
    }
    if (msg) broadcast(ev.agent, *msg);
    // A single agent has nobody to tell; its mark still ends the run.
    if (p.state.final_mark()) note_final(ev.agent);

    switch (algorithm_) {
      case Algorithm::sdpp: arrive(now_); break;
      case Algorithm::adpp: schedule_resume(ev.agent); break;
      default: break;
    }
  }

  void on_delivery(const Event& ev) {
    Proc& p = proc(ev.agent);
    const InformMessage& msg = messages_[ev.token];
    const Directive d = p.state.handle_inform(msg, algorithm_);
    if (msg.kind == MessageKind::final_mark) {
      // Termination detection runs alongside the protocol: an idle agent may pass the mark on.
      if (!p.busy && !p.state.final_mark()) {
        if (auto out = p.state.settle(false)) broadcast(ev.agent, *out);
        if (p.state.final_mark()) note_final(ev.agent);
      }
      return;
    }
    if (p.state.final_mark()) return;
    if (d == Directive::recheck) {
      if (!p.busy) schedule_resume(ev.agent);
    } else if (d == Directive::restart) {
      if (p.busy) cancel(ev.agent);
      schedule_resume(ev.agent);
    }
  }

  void cancel(int i) {
    Proc& p = proc(i);
    auto& entry = schedule_[p.schedule_index];
    if (p.pending_plan) {
      ++restarts_;
      entry.activity = "plan-interrupted";
      const double full = entry.end - entry.start;
      const double frac = full > 0.0 ? (now_ - p.busy_since) / full : 0.0;
      p.expansions += static_cast<std::size_t>(std::floor(frac * static_cast<double>(p.pending.expansions)));
    } else {
      entry.activity = "check-interrupted";
    }
    entry.end = now_;
    last_activity_ = std::max(last_activity_, now_);
    p.busy = false;
    ++p.generation;
    p.pending = PlanResult{};
  }

  void schedule_resume(int i) {
    Proc& p = proc(i);
    if (p.resume_pending) return;
    p.resume_pending = true;
    push(now_, i, EventKind::resume, 0);
  }

  void on_resume(int i) {
    Proc& p = proc(i);
    p.resume_pending = false;
    if (p.busy || p.state.final_mark()) return;
    if (algorithm_ == Algorithm::adpp) {
      if (!p.state.check_flag()) return;
      p.state.clear_check_flag();
    }
    start_check(i, now_);
  }

  void arrive(double t) {
    if (++arrived_ == n_) push(t, 0, EventKind::barrier_release, 0);
  }

  void on_barrier() {
    arrived_ = 0;
    if (terminated_) {
      stopped_ = true;
      return;
    }
    ++iteration_;
    for (int i = 1; i <= n_; ++i) start_or_arrive(i, now_);
  }

  [[noreturn]] void livelock() {
    std::string who;
    int listed = 0;
    for (int i = 1; i <= n_ && listed < 5; ++i) {
      if (!proc(i).state.final_mark()) {
        who += (listed++ ? ", " : "") + std::to_string(i);
      }
    }
    throw SimulationError("event limit of " + std::to_string(config_.max_events) +
                          " reached; agents still not final: " + who);
  }

  void finish(RunResult& out) {
    RunReport& r = out.report;
    r.algorithm = algorithm_;
    r.n_agents = n_;
    r.wallclock = last_activity_;
    r.messages = count_messages(trace_);
    r.plans = plans_;
    r.iterations = algorithm_ == Algorithm::sdpp ? iteration_ : 0;
    r.restarts = restarts_;
    r.events = events_;
    r.seed = config_.seed;
    r.cost_model = config_.cost;
    r.horizon_base = planner_.base_horizon();
    r.termination_time = terminated_ ? termination_time_ : std::numeric_limits<double>::quiet_NaN();
    r.termination_agrees = (n_ == 0 || terminated_) && !late_activity_;
    for (auto& p : procs_) {
      r.expansions.push_back(p.expansions);
      r.broadcasts.push_back(p.broadcasts);
      out.solution.push_back(p.state.path());
    }
    out.schedule = std::move(schedule_);
    out.trace = std::move(trace_);
  }

  const Planner& planner_;
  Algorithm algorithm_;
  SimConfig config_;
  int n_;
  std::vector<Proc> procs_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::vector<InformMessage> messages_;
  std::vector<ScheduleEntry> schedule_;
  std::vector<TraceRecord> trace_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  double last_activity_ = 0.0;
  double termination_time_ = 0.0;
  bool terminated_ = false;
  bool late_activity_ = false;
  bool stopped_ = false;
  int arrived_ = 0;
  int iteration_ = 0;
  std::size_t plans_ = 0;
  std::size_t restarts_ = 0;
  std::size_t events_ = 0;
};

void fill_quality(RunResult& out, const Planner& planner, const SolutionSet* ideal) {
  RunReport& r = out.report;
  r.failed = has_failure(out.solution);
  if (r.failed) {
    r.dur = std::numeric_limits<double>::quiet_NaN();
    r.cost = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  r.dur = dur(out.solution);
  SolutionSet computed;
  if (ideal == nullptr) {
    computed = ideal_solution(planner).solution;
    ideal = &computed;
  }
  r.cost = cost(out.solution, *ideal);
}

}  // namespace

RunResult simulate(const Planner& planner, Algorithm algorithm, const SimConfig& config, const SolutionSet* ideal) {
  if (algorithm == Algorithm::ca) throw InvalidArgument("simulate() runs the decentralized algorithms only");
  config.cost.validate();
  if (!config.cost.plan_cost.empty() && config.cost.plan_cost.size() != static_cast<std::size_t>(planner.agent_count()))
    throw InvalidArgument("fixed planning costs must list every agent");
  Simulator sim(planner, algorithm, config);
  RunResult out = sim.run();
  fill_quality(out, planner, ideal);
  return out;
}

RunResult run_ca_analytic(const Planner& planner, const SimConfig& config, const SolutionSet* ideal) {
  config.cost.validate();
  RunResult out;
  RunReport& r = out.report;
  r.algorithm = Algorithm::ca;
  r.n_agents = planner.agent_count();
  r.seed = config.seed;
  r.cost_model = config.cost;
  r.horizon_base = planner.base_horizon();

  // Every agent reports its objective to the solver at t = 0...
  for (int i = 1; i <= r.n_agents; ++i) out.trace.push_back(TraceRecord{0.0, i, 0, false, MessageKind::inform, 0});

  std::vector<Path> avoids;
  double t = 0.0;
  for (int i = 1; i <= r.n_agents; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    PlanResult p = planner.plan(i, avoids);
    const double measured = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double d = config.cost.plan_duration(i, p.expansions, measured);
    out.schedule.push_back(ScheduleEntry{i, t, t + d, "plan", 0});
    t += d;
    r.expansions.push_back(p.expansions);
    r.broadcasts.push_back(0);
    ++r.plans;
    if (p.path) avoids.push_back(p.path);
    out.solution.push_back(std::move(p.path));
  }
  // ...and receives its path once the sequential plan is done.
  for (int i = 1; i <= r.n_agents; ++i)
    out.trace.push_back(TraceRecord{t, 0, i, true, MessageKind::inform, payload_hash(out.solution[i - 1])});

  r.wallclock = t;
  r.termination_time = t;
  r.messages = count_messages(out.trace);
  fill_quality(out, planner, ideal);
  return out;
}

RunResult run_algorithm(const Planner& planner, Algorithm algorithm, const SimConfig& config,
                        const SolutionSet* ideal) {
  if (algorithm == Algorithm::ca) return run_ca_analytic(planner, config, ideal);
  return simulate(planner, algorithm, config, ideal);
}

}  // namespace dpp
