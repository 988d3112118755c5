#include "dpp/protocol.hpp"

namespace dpp {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ca: return "ca";
    case Algorithm::sdpp: return "sdpp";
    case Algorithm::adpp: return "adpp";
    case Algorithm::iadpp: return "iadpp";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "ca") return Algorithm::ca;
  if (s == "sdpp") return Algorithm::sdpp;
  if (s == "adpp") return Algorithm::adpp;
  if (s == "iadpp") return Algorithm::iadpp;
  throw InvalidArgument("unknown algorithm '" + s + "' (expected ca|sdpp|adpp|iadpp)");
}

GridPlanner::GridPlanner(Scenario scenario) : scenario_(std::move(scenario)), graph_(scenario_.grid) {
  scenario_.validate();
}

PlanResult GridPlanner::plan(int priority, std::span<const Path> avoids, const InterruptProbe& interrupt) const {
  if (priority < 1 || priority > agent_count()) throw InvalidArgument("no agent with that priority");
  const auto& task = scenario_.agents[priority - 1];
  PlanningQuery q{&graph_, task.start, task.dest, avoids, scenario_.motion()};
  return best_path(q, interrupt);
}

double GridPlanner::base_horizon() const { return default_horizon(graph_, {}, scenario_.v_max); }

bool AgentView::update(int priority, Path path, bool final) {
  auto [it, inserted] = entries_.try_emplace(priority);
  ViewEntry& e = it->second;
  bool changed = inserted;
  if (!inserted) {
    if (static_cast<bool>(e.path) != static_cast<bool>(path))
      changed = true;
    else if (path && e.path != path && !(*e.path == *path))
      changed = true;
  }
  e.path = std::move(path);
  e.final = final;
  if (changed) {
    e.serial = next_serial_++;
    ++revision_;
  }
  return changed;
}

void AgentView::mark_final(int priority) {
  if (auto it = entries_.find(priority); it != entries_.end()) it->second.final = true;
}

const ViewEntry* AgentView::find(int priority) const {
  auto it = entries_.find(priority);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<Path> AgentView::snapshot() const {
  std::vector<Path> out;
  out.reserve(entries_.size());
  for (const auto& [p, e] : entries_) out.push_back(e.path);
  return out;
}

AgentState::AgentState(int priority, int n_agents, double separation)
    : priority_(priority), n_agents_(n_agents), separation_(separation) {
  if (priority < 1 || priority > n_agents) throw InvalidArgument("agent priority out of range");
}

bool AgentState::needs_plan() const {
  if (!has_path_) return true;
  // A failure is vacuously consistent, but is retried once the view has moved on.
  if (!path_) return view_.revision() != planned_revision_;
  for (const auto& [p, e] : view_.entries()) {
    if (!e.path) continue;
    Verdict& v = verdicts_[p];
    if (v.generation != path_generation_ || v.serial != e.serial) {
      v.generation = path_generation_;
      v.serial = e.serial;
      v.conflict = in_conflict(*path_, *e.path, separation_);
    }
    if (v.conflict) return true;
  }
  return false;
}

std::vector<Path> AgentState::snapshot_avoids() {
  snapshot_revision_ = view_.revision();
  return view_.snapshot();
}

void AgentState::adopt(Path path) {
  if (final_) throw ProtocolError("agent " + std::to_string(priority_) + " replanned after its path was final");
  path_ = std::move(path);
  has_path_ = true;
  planned_revision_ = snapshot_revision_;
  ++path_generation_;
}

Directive AgentState::handle_inform(const InformMessage& msg, Algorithm mode) {
  if (msg.sender >= priority_)
    throw ProtocolError("agent " + std::to_string(priority_) + " received an inform from agent " +
                        std::to_string(msg.sender));
  if (msg.kind == MessageKind::final_mark) {
    view_.mark_final(msg.sender);
    return Directive::none;
  }
  view_.update(msg.sender, msg.payload, msg.final);
  switch (mode) {
    case Algorithm::adpp:
      check_flag_ = true;
      return Directive::recheck;
    case Algorithm::iadpp: return Directive::restart;
    default: return Directive::none;
  }
}

bool AgentState::update_final_mark() {
  if (final_ || !has_path_) return false;
  if (priority_ > 1) {
    for (int j = 1; j < priority_; ++j) {
      const ViewEntry* e = view_.find(j);
      if (e == nullptr || !e->final) return false;
    }
    if (needs_plan()) return false;
  }
  final_ = true;
  return true;
}

std::optional<InformMessage> AgentState::settle(bool replanned) {
  const bool flipped = update_final_mark();
  if (replanned) return InformMessage{priority_, path_, final_, MessageKind::inform};
  if (flipped) return InformMessage{priority_, path_, true, MessageKind::final_mark};
  return std::nullopt;
}

std::vector<int> AgentState::recipients() const {
  std::vector<int> out;
  for (int j = priority_ + 1; j <= n_agents_; ++j) out.push_back(j);
  return out;
}

ProtocolEffect check_consistency_and_plan(AgentState& state, const Planner& planner,
                                          const InterruptProbe& interrupt) {
  ProtocolEffect effect;
  if (state.final_mark()) return effect;
  if (state.needs_plan()) {
    const auto avoids = state.snapshot_avoids();
    PlanResult r = planner.plan(state.priority(), avoids, interrupt);
    effect.plan_expansions = r.expansions;
    if (r.interrupted) {
      effect.interrupted = true;
      return effect;
    }
    state.adopt(std::move(r.path));
    effect.kind = ProtocolEffect::Kind::planned;
    effect.broadcast = state.settle(true);
  } else {
    effect.broadcast = state.settle(false);
  }
  if (effect.broadcast) effect.recipients = state.recipients();
  return effect;
}

CaResult ca_solve(const Planner& planner) {
  CaResult out;
  std::vector<Path> avoids;
  for (int i = 1; i <= planner.agent_count(); ++i) {
    PlanResult r = planner.plan(i, avoids);
    out.expansions.push_back(r.expansions);
    if (r.path) avoids.push_back(r.path);
    out.solution.push_back(std::move(r.path));
  }
  return out;
}

CaResult ideal_solution(const Planner& planner) {
  CaResult out;
  for (int i = 1; i <= planner.agent_count(); ++i) {
    PlanResult r = planner.plan(i, {});
    out.expansions.push_back(r.expansions);
    out.solution.push_back(std::move(r.path));
  }
  return out;
}

}  // namespace dpp
