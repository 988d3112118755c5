#include "dpp/threaded.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <condition_variable>
#include <deque>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace dpp {

namespace {

using Clock = std::chrono::steady_clock;

struct Mailbox {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<InformMessage> queue;
  std::atomic<int> pending_informs{0};
};

class ThreadedRun {
 public:
  ThreadedRun(const Planner& planner, Algorithm algorithm)
      : planner_(planner),
        algorithm_(algorithm),
        n_(planner.agent_count()),
        boxes_(static_cast<std::size_t>(n_)),
        barrier_(std::max(n_, 1), BarrierDone{this}) {
    for (int i = 1; i <= n_; ++i) states_.emplace_back(i, n_, planner.separation());
    expansions_.assign(static_cast<std::size_t>(n_), 0);
    broadcasts_.assign(static_cast<std::size_t>(n_), 0);
  }

  RunResult run(const ThreadedConfig& config) {
    start_ = Clock::now();
    std::vector<std::thread> threads;
    for (int i = 1; i <= n_; ++i) threads.emplace_back([this, i] { agent_main(i); });

    bool timed_out = false;
    {
      std::unique_lock lock(done_mu_);
      if (n_ > 0 && !done_cv_.wait_for(lock, config.timeout, [&] { return terminated_.load() || aborted_.load(); })) {
        timed_out = true;
        aborted_ = true;
      }
    }
    wake_all();
    for (auto& t : threads) t.join();
    if (timed_out) throw SimulationError("threaded run did not terminate within the watchdog timeout\n" + dump());
    if (!errors_.empty()) throw SimulationError("threaded run aborted\n" + dump());

    RunResult out;
    RunReport& r = out.report;
    r.algorithm = algorithm_;
    r.n_agents = n_;
    r.wallclock = std::chrono::duration<double>(last_activity_ - start_).count();
    if (r.wallclock < 0) r.wallclock = 0;
    r.termination_time = std::chrono::duration<double>(termination_ - start_).count();
    r.termination_agrees = true;
    r.plans = plans_;
    r.restarts = restarts_;
    r.iterations = iterations_;
    r.horizon_base = planner_.base_horizon();
    r.cost_model.mode = CostModel::Mode::measured;
    r.expansions = expansions_;
    r.broadcasts = broadcasts_;
    for (const auto& s : states_) out.solution.push_back(s.path());
    std::stable_sort(trace_.begin(), trace_.end(), [](const TraceRecord& a, const TraceRecord& b) { return a.time < b.time; });
    out.trace = std::move(trace_);
    r.messages = count_messages(out.trace);
    return out;
  }

 private:
  struct BarrierDone {
    ThreadedRun* run;
    void operator()() noexcept {
      ++run->iterations_;
      if (run->terminated_ || run->aborted_) run->stop_ = true;
    }
  };

  void agent_main(int i) {
    try {
      switch (algorithm_) {
        case Algorithm::sdpp: run_sdpp(i); break;
        case Algorithm::adpp: run_adpp(i); break;
        default: run_iadpp(i); break;
      }
    } catch (const std::exception& e) {
      std::lock_guard lock(log_mu_);
      errors_ += "agent " + std::to_string(i) + ": " + e.what() + "\n";
      aborted_ = true;
    }
    if (aborted_ && algorithm_ == Algorithm::sdpp && !stop_) {
      // Keep the others from waiting on a barrier this agent will never reach again.
      barrier_.arrive_and_drop();
    }
    if (aborted_) {
      wake_all();
    }
  }

  AgentState& state(int i) { return states_[static_cast<std::size_t>(i - 1)]; }
  Mailbox& box(int i) { return boxes_[static_cast<std::size_t>(i - 1)]; }

  // Returns true when any message was handled.
  bool drain(int i) {
    std::deque<InformMessage> msgs;
    {
      std::lock_guard lock(box(i).mu);
      msgs.swap(box(i).queue);
    }
    for (const auto& m : msgs) {
      if (m.kind == MessageKind::inform) box(i).pending_informs.fetch_sub(1);
      state(i).handle_inform(m, algorithm_);
    }
    return !msgs.empty();
  }

  void wait_for_mail(int i) {
    std::unique_lock lock(box(i).mu);
    box(i).cv.wait(lock, [&] { return !box(i).queue.empty() || terminated_ || aborted_; });
  }

  void wake_all() {
    for (auto& b : boxes_) {
      std::lock_guard lock(b.mu);
      b.cv.notify_all();
    }
    done_cv_.notify_all();
  }

  void run_check(int i, const InterruptProbe& probe) {
    ProtocolEffect e = check_consistency_and_plan(state(i), planner_, probe);
    {
      std::lock_guard lock(log_mu_);
      expansions_[static_cast<std::size_t>(i - 1)] += e.plan_expansions;
      if (e.interrupted) ++restarts_;
      if (e.kind == ProtocolEffect::Kind::planned) ++plans_;
      last_activity_ = std::max(last_activity_, Clock::now());
    }
    if (e.broadcast) send(i, *e.broadcast);
    if (state(i).final_mark() && i == n_) {
      {
        std::lock_guard lock(done_mu_);
        if (!terminated_) termination_ = Clock::now();
        terminated_ = true;
      }
      wake_all();
    }
  }

  void send(int i, const InformMessage& msg) {
    const auto t = std::chrono::duration<double>(Clock::now() - start_).count();
    const auto hash = payload_hash(msg.payload);
    {
      std::lock_guard lock(log_mu_);
      if (msg.kind == MessageKind::inform) ++broadcasts_[static_cast<std::size_t>(i - 1)];
      for (int j = i + 1; j <= n_; ++j) trace_.push_back(TraceRecord{t, i, j, msg.final, msg.kind, hash});
    }
    for (int j = i + 1; j <= n_; ++j) {
      std::lock_guard lock(box(j).mu);
      box(j).queue.push_back(msg);
      if (msg.kind == MessageKind::inform) box(j).pending_informs.fetch_add(1);
      box(j).cv.notify_all();
    }
  }

  void run_sdpp(int i) {
    while (true) {
      if (!state(i).final_mark() && !aborted_) run_check(i, {});
      barrier_.arrive_and_wait();
      if (stop_) return;
      drain(i);
    }
  }

  void run_adpp(int i) {
    run_check(i, {});
    while (!terminated_ && !aborted_) {
      const bool got = drain(i);
      if (state(i).final_mark()) {
        wait_for_mail(i);
        continue;
      }
      if (state(i).check_flag() || got) {
        state(i).clear_check_flag();
        run_check(i, {});
        continue;
      }
      wait_for_mail(i);
    }
  }

  void run_iadpp(int i) {
    Mailbox& b = box(i);
    auto probe = [&] { return b.pending_informs.load() > 0 || aborted_.load(); };
    run_check(i, probe);
    while (!terminated_ && !aborted_) {
      if (drain(i) && !state(i).final_mark()) {
        run_check(i, probe);
        continue;
      }
      wait_for_mail(i);
    }
  }

  std::string dump() {
    std::ostringstream os;
    os << errors_;
    for (const auto& s : states_) {
      os << "agent " << s.priority() << ": has_path=" << s.has_path() << " failed=" << (s.has_path() && !s.path())
         << " final=" << s.final_mark() << " check_flag=" << s.check_flag() << " view=" << s.view().size()
         << "\n";
    }
    return os.str();
  }

  const Planner& planner_;
  Algorithm algorithm_;
  int n_;
  std::vector<AgentState> states_;
  std::vector<Mailbox> boxes_;
  std::barrier<BarrierDone> barrier_;
  std::atomic<bool> terminated_{false};
  std::atomic<bool> aborted_{false};
  std::atomic<bool> stop_{false};
  int iterations_ = 0;
  std::mutex done_mu_;
  std::condition_variable done_cv_;
  std::mutex log_mu_;
  std::string errors_;
  std::vector<std::size_t> expansions_;
  std::vector<std::size_t> broadcasts_;
  std::size_t plans_ = 0;
  std::size_t restarts_ = 0;
  std::vector<TraceRecord> trace_;
  Clock::time_point start_;
  Clock::time_point last_activity_{};
  Clock::time_point termination_{};
};

}  // namespace

RunResult run_threaded(const Planner& planner, Algorithm algorithm, const ThreadedConfig& config,
                       const SolutionSet* ideal) {
  if (algorithm == Algorithm::ca) throw InvalidArgument("run_threaded() runs the decentralized algorithms only");
  ThreadedRun run(planner, algorithm);
  RunResult out = run.run(config);
  out.report.failed = has_failure(out.solution);
  if (out.report.failed) {
    out.report.dur = out.report.cost = std::numeric_limits<double>::quiet_NaN();
  } else {
    out.report.dur = dur(out.solution);
    out.report.cost = ideal ? cost(out.solution, *ideal) : cost(out.solution, ideal_solution(planner).solution);
  }
  return out;
}

}  // namespace dpp
