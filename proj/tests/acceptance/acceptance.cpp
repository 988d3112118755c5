// Acceptance suite: one PASS/FAIL line per criterion. Artifacts go to argv[1]
// (default: ./acceptance_artifacts). Exit status 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dpp/harness.hpp"
#include "dpp/threaded.hpp"
#include "oracles/instances.hpp"
#include "oracles/oracles.hpp"

using namespace dpp;
namespace fs = std::filesystem;

namespace {

constexpr double kSep = 0.8;
const std::vector<Algorithm> kAll{Algorithm::ca, Algorithm::sdpp, Algorithm::adpp, Algorithm::iadpp};
const std::vector<Algorithm> kDecentralized{Algorithm::sdpp, Algorithm::adpp, Algorithm::iadpp};

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures.size() < 12) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

GridSpec desk_grid() { return GridSpec{30, 30, 20.0, 20.0, Connectivity::eight, {}}; }

struct Instance {
  std::string label;
  std::uint64_t seed = 0;
  Scenario scenario;
};

struct SuiteRun {
  const Instance* instance = nullptr;
  Algorithm algorithm = Algorithm::ca;
  RunResult result;
  SolutionSet ideal;
};

std::vector<Instance> suite_instances() {
  std::vector<Instance> out;
  for (int n : {10, 20, 30})
    for (std::uint64_t s = 1; s <= 10; ++s)
      out.push_back({"random-" + std::to_string(n), s, gen_random(paper_random_grid(), n, s)});
  for (const auto& src : table1_spec(false).sources)
    for (std::uint64_t s = 0; s < 10; ++s) out.push_back({src.label, s, make_scenario(src, s)});
  for (auto w : {CorridorWidth::wide, CorridorWidth::narrow})
    for (auto o : {CorridorOrder::agent1_first, CorridorOrder::agent2_first}) {
      Scenario sc = gen_corridor(o, w);
      out.push_back({sc.label, 0, sc});
    }
  return out;
}

std::string run_name(const SuiteRun& r) {
  return r.instance->label + " seed " + std::to_string(r.instance->seed) + " " + to_string(r.algorithm);
}

// Pairwise separation of a successful solution: analytic and dense-sampled.
void check_separation(Verdict& v, const SolutionSet& sol, const std::string& name) {
  double end = 0.0;
  for (const auto& p : sol) end = std::max(end, p->dest_time());
  end += 10.0;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    for (std::size_t j = i + 1; j < sol.size(); ++j) {
      const double analytic = min_distance(*sol[i], *sol[j]);
      v.require(analytic >= kSep - 1e-9, name + ": agents " + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                             " analytic distance " + fmt(analytic, 9));
      const double sampled = oracle::sampled_min_distance(*sol[i], *sol[j], 0.05, end);
      v.require(sampled >= kSep - 1e-6, name + ": agents " + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                            " sampled distance " + fmt(sampled, 9));
    }
  }
}

// Priority-1 optimality, single broadcast of agent 1, SDPP iteration bound.
void check_proofs(Verdict& v, const RunResult& r, const SolutionSet& ideal, Algorithm a, const std::string& name) {
  if (!r.solution.empty()) {
    v.require(r.solution[0] && ideal[0] && r.solution[0]->dest_time() == ideal[0]->dest_time(),
              name + ": agent 1 is not at its unconstrained optimum");
  }
  if (a != Algorithm::ca)
    v.require(!r.report.broadcasts.empty() && r.report.broadcasts[0] == 1,
              name + ": agent 1 broadcast " + std::to_string(r.report.broadcasts.empty() ? 0 : r.report.broadcasts[0]) +
                  " times");
  if (a == Algorithm::sdpp)
    v.require(r.report.iterations <= r.report.n_agents,
              name + ": " + std::to_string(r.report.iterations) + " SDPP iterations for " +
                  std::to_string(r.report.n_agents) + " agents");
}

void print(int id, const char* title, const Verdict& v, double seconds) {
  std::printf("criterion %2d: %s  %s  (%.1f s)\n", id, v.pass ? "PASS" : "FAIL", title, seconds);
  for (const auto& n : v.notes) std::printf("    %s\n", n.c_str());
  for (const auto& f : v.failures) std::printf("    violation: %s\n", f.c_str());
  std::fflush(stdout);
}

double mean_of(const std::vector<AggregateRow>& rows, const std::string& scenario, Algorithm a) {
  for (const auto& r : rows)
    if (r.scenario == scenario && r.algorithm == a) return r.wallclock;
  throw std::runtime_error("no aggregate row for " + scenario);
}

const AggregateRow& row_of(const std::vector<AggregateRow>& rows, const std::string& scenario, Algorithm a) {
  for (const auto& r : rows)
    if (r.scenario == scenario && r.algorithm == a) return r;
  throw std::runtime_error("no aggregate row for " + scenario);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Hand-set unit costs, no handler cost: one planning call = one time unit per cost entry.
SimConfig unit_costs(std::vector<double> costs) {
  SimConfig c;
  c.cost.plan_cost = std::move(costs);
  c.cost.t_handler = 0.0;
  return c;
}

struct Fixture {
  std::string name;
  Scenario scenario;
  std::vector<double> costs;
  std::map<Algorithm, double> expected;
};

std::vector<Fixture> schedule_fixtures() {
  std::vector<Fixture> out;
  {
    Scenario sc;
    sc.grid = GridSpec{5, 7, 4.0, 6.0, Connectivity::four, {}};
    sc.agents = {AgentTask{{0, 1}, {4, 1}, 0}, AgentTask{{0, 3}, {4, 3}, 0}, AgentTask{{0, 5}, {4, 5}, 0}};
    sc.label = "fig2b-independent";
    out.push_back({"fig2b", sc, {1, 1, 1}, {{Algorithm::sdpp, 1}, {Algorithm::adpp, 1}, {Algorithm::iadpp, 1}}});
  }
  {
    Scenario sc = gen_superconflict({3, 3}, 2.0, 3, GridSpec{7, 7, 6.0, 6.0, Connectivity::four, {}});
    sc.label = "fig2c-superconflict";
    out.push_back({"fig2c", sc, {1, 1, 1}, {{Algorithm::sdpp, 3}, {Algorithm::adpp, 3}, {Algorithm::iadpp, 3}}});
  }
  {
    const GridSpec grid{15, 7, 14.0, 6.0, Connectivity::four, {}};
    Scenario sc = gen_superconflict({3, 3}, 2.0, 2, grid);
    const Scenario b = gen_superconflict({11, 3}, 2.0, 3, grid);
    sc.agents.insert(sc.agents.end(), b.agents.begin(), b.agents.end());
    sc.label = "fig3-two-clusters";
    sc.validate();
    out.push_back({"fig3", sc, {2, 2, 1, 1, 1}, {{Algorithm::sdpp, 5}, {Algorithm::adpp, 4}}});
  }
  {
    Scenario sc;
    sc.grid = GridSpec{6, 6, 5.0, 5.0, Connectivity::four, {}};
    sc.agents = {AgentTask{{1, 5}, {5, 3}, 0}, AgentTask{{1, 3}, {4, 5}, 0}, AgentTask{{4, 4}, {2, 5}, 0}};
    sc.label = "fig4-stale-plan";
    out.push_back({"fig4", sc, {1, 2, 1}, {{Algorithm::sdpp, 5}, {Algorithm::adpp, 5}, {Algorithm::iadpp, 4}}});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_artifacts");
  fs::remove_all(out);
  fs::create_directories(out);
  using Clock = std::chrono::steady_clock;
  auto since = [](Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); };
  bool all_pass = true;
  auto emit = [&](int id, const char* title, const Verdict& v, double s) {
    all_pass = all_pass && v.pass;
    print(id, title, v, s);
  };

  // Shared suite: random n in {10,20,30} x 10 seeds, the four superconflicts x 10 seeds, the
  // four corridors; every algorithm under the deterministic cost model.
  auto t0 = Clock::now();
  const auto instances = suite_instances();
  std::vector<SuiteRun> runs;
  for (const auto& inst : instances) {
    const GridPlanner planner(inst.scenario);
    const SolutionSet ideal = ideal_solution(planner).solution;
    for (auto a : kAll) runs.push_back(SuiteRun{&inst, a, run_algorithm(planner, a, SimConfig{}, &ideal), ideal});
  }
  const double suite_seconds = since(t0);

  // 1. Collision freedom.
  {
    t0 = Clock::now();
    Verdict v;
    std::size_t checked = 0;
    for (const auto& r : runs) {
      if (r.result.report.failed) continue;
      ++checked;
      check_separation(v, r.result.solution, run_name(r));
    }
    v.require(checked >= 100, "only " + std::to_string(checked) + " successful runs");
    v.note(std::to_string(runs.size()) + " runs, " + std::to_string(checked) +
           " successful solutions checked (analytic >= 0.8 - 1e-9, sampled dt 0.05 >= 0.8 - 1e-6)");
    emit(1, "collision freedom", v, suite_seconds + since(t0));
  }

  // 2. Planner against brute-force BFS.
  {
    t0 = Clock::now();
    Verdict v;
    const GridGraph g(GridSpec{5, 5, 4.0, 4.0, Connectivity::four, {}});
    std::mt19937_64 rng(2024);
    int solved = 0, infeasible = 0, delayed = 0;
    for (int k = 0; k < 60; ++k) {
      const auto inst = oracle::random_small_instance(g, rng);
      const auto r = best_path(PlanningQuery{&g, inst.start, inst.dest, inst.avoids, MotionParams{}});
      std::vector<Trajectory> obs;
      for (const auto& a : inst.avoids) obs.push_back(*a);
      const auto bfs = oracle::bfs_dest_time(g, inst.start, inst.dest, obs, 1.0, 0.5, kSep, 0.5, r.horizon);
      const std::string name = "instance " + std::to_string(k);
      v.require(static_cast<bool>(r.path) == bfs.has_value(), name + ": existence differs from BFS");
      if (r.path && bfs) {
        v.require(r.path->dest_time() == *bfs,
                  name + ": dest_time " + fmt(r.path->dest_time(), 12) + " vs BFS " + fmt(*bfs, 12));
        ++solved;
        if (r.path->dest_time() > distance(g.position(inst.start), g.position(inst.dest)) + 1e-9) ++delayed;
      }
      if (!bfs) ++infeasible;
    }
    v.require(solved >= 50, "only " + std::to_string(solved) + " feasible instances");
    v.note("60 instances: " + std::to_string(solved) + " feasible (" + std::to_string(delayed) +
           " delayed by obstacles), " + std::to_string(infeasible) + " infeasible; exact equality");
    emit(2, "planner equals brute-force BFS optimum", v, since(t0));
  }

  // 3. Priority-1 optimality, one broadcast from agent 1, SDPP iterations <= N.
  {
    Verdict v;
    int max_iter_ratio_n = 0, max_iter = 0;
    for (const auto& r : runs) {
      check_proofs(v, r.result, r.ideal, r.algorithm, run_name(r));
      if (r.algorithm == Algorithm::sdpp && r.result.report.iterations > max_iter) {
        max_iter = r.result.report.iterations;
        max_iter_ratio_n = r.result.report.n_agents;
      }
    }
    v.note("checked " + std::to_string(runs.size()) + " runs; largest SDPP iteration count " +
           std::to_string(max_iter) + " (N = " + std::to_string(max_iter_ratio_n) + ")");
    emit(3, "priority-1 optimality and SDPP bound", v, 0.0);
  }

  // 4. Schedule patterns under unit costs.
  {
    t0 = Clock::now();
    Verdict v;
    for (const auto& f : schedule_fixtures()) {
      const GridPlanner planner(f.scenario);
      save_scenario(out / "schedules" / (f.name + ".scenario.json"), f.scenario);
      std::string line = f.name + ":";
      for (auto a : kDecentralized) {
        RunResult r = run_algorithm(planner, a, unit_costs(f.costs));
        r.report.scenario = f.scenario.label;
        write_json_file(out / "schedules" / (f.name + "-" + to_string(a) + ".json"),
                        schedule_to_json(r.schedule, r.report));
        line += " " + to_string(a) + "=" + fmt(r.report.wallclock);
        if (auto it = f.expected.find(a); it != f.expected.end())
          v.require(r.report.wallclock == it->second, f.name + " " + to_string(a) + ": " + fmt(r.report.wallclock) +
                                                           " units, expected " + fmt(it->second));
      }
      v.note(line);
    }
    emit(4, "schedule patterns in time units", v, since(t0));
  }

  // 5. Table 1 trends at desk scale.
  ExperimentResult table1;
  {
    t0 = Clock::now();
    Verdict v;
    ExperimentSpec spec = table1_spec(false);
    spec.out_dir = out / "table1";
    table1 = run_experiment(spec);
    const auto& rows = table1.rows;
    for (const auto& r : rows)
      v.require(r.samples == 10, r.scenario + " " + to_string(r.algorithm) + ": only " + std::to_string(r.samples) +
                                     " instances without failures");
    const std::string single = "single-superconflict", homog = "four-homogeneous", het = "four-heterogeneous",
                      spiral = "spiral";
    const double ca_ratio = mean_of(rows, homog, Algorithm::ca) / mean_of(rows, single, Algorithm::ca);
    const double adpp_ratio = mean_of(rows, homog, Algorithm::adpp) / mean_of(rows, single, Algorithm::adpp);
    const double iadpp_ratio = mean_of(rows, homog, Algorithm::iadpp) / mean_of(rows, single, Algorithm::iadpp);
    v.require(ca_ratio >= 3.0, "homogeneous CA/single = " + fmt(ca_ratio) + " (need >= 3)");
    v.require(adpp_ratio <= 1.5, "homogeneous ADPP/single = " + fmt(adpp_ratio) + " (need <= 1.5)");
    v.require(iadpp_ratio <= 1.5, "homogeneous IADPP/single = " + fmt(iadpp_ratio) + " (need <= 1.5)");
    v.note("four-homogeneous / single: CA " + fmt(ca_ratio) + ", ADPP " + fmt(adpp_ratio) + ", IADPP " +
           fmt(iadpp_ratio));
    const double het_adpp = mean_of(rows, het, Algorithm::adpp) / mean_of(rows, het, Algorithm::sdpp);
    const double het_iadpp = mean_of(rows, het, Algorithm::iadpp) / mean_of(rows, het, Algorithm::sdpp);
    v.require(het_adpp <= 0.7, "heterogeneous ADPP/SDPP = " + fmt(het_adpp) + " (need <= 0.7)");
    v.require(het_iadpp <= 0.7, "heterogeneous IADPP/SDPP = " + fmt(het_iadpp) + " (need <= 0.7)");
    v.note("four-heterogeneous / SDPP: ADPP " + fmt(het_adpp) + ", IADPP " + fmt(het_iadpp));
    const double sp = mean_of(rows, spiral, Algorithm::iadpp) / mean_of(rows, spiral, Algorithm::adpp);
    v.require(sp <= 0.5, "spiral IADPP/ADPP = " + fmt(sp) + " (need <= 0.5)");
    v.note("spiral IADPP/ADPP " + fmt(sp));
    for (const auto& src : {single, homog, het, spiral}) {
      std::string line = src + " mean wall-clock [s]:";
      for (auto a : kAll) line += " " + to_string(a) + "=" + fmt(mean_of(rows, src, a));
      v.note(line);
    }
    emit(5, "superconflict wall-clock trends", v, since(t0));
  }

  // 6. ADPP never slower than SDPP.
  {
    Verdict v;
    std::map<const Instance*, std::map<Algorithm, const RunReport*>> by_instance;
    for (const auto& r : runs) by_instance[r.instance][r.algorithm] = &r.result.report;
    std::size_t compared = 0;
    for (const auto& [inst, reps] : by_instance) {
      const double s = reps.at(Algorithm::sdpp)->wallclock, a = reps.at(Algorithm::adpp)->wallclock;
      ++compared;
      v.require(a <= s, inst->label + " seed " + std::to_string(inst->seed) + ": ADPP " + fmt(a * 1e3, 6) +
                            " ms > SDPP " + fmt(s * 1e3, 6) + " ms");
    }
    v.note(std::to_string(compared) + " instances compared");
    emit(6, "ADPP wall-clock <= SDPP on every run", v, 0.0);
  }

  // 7 and 8. Random sweep: communication and cost.
  ExperimentResult sweep;
  {
    t0 = Clock::now();
    ExperimentSpec spec = random_sweep_spec(false);
    spec.out_dir = out / "random-sweep";
    sweep = run_experiment(spec);
    const double sweep_seconds = since(t0);

    Verdict v7;
    for (const auto& run : sweep.runs)
      if (run.report.algorithm == Algorithm::ca)
        v7.require(run.report.messages == 2 * static_cast<std::size_t>(run.report.n_agents),
                   run.source + " seed " + std::to_string(run.seed) + ": CA sent " +
                       std::to_string(run.report.messages) + " messages");
    for (const auto& src : spec.sources) {
      const auto& a = row_of(sweep.rows, src.label, Algorithm::adpp);
      const auto& i = row_of(sweep.rows, src.label, Algorithm::iadpp);
      v7.require(i.messages <= a.messages,
                 src.label + ": IADPP " + fmt(i.messages) + " > ADPP " + fmt(a.messages) + " messages");
      v7.note(src.label + " mean messages: ca=" + fmt(row_of(sweep.rows, src.label, Algorithm::ca).messages) +
              " sdpp=" + fmt(row_of(sweep.rows, src.label, Algorithm::sdpp).messages) + " adpp=" + fmt(a.messages) +
              " iadpp=" + fmt(i.messages) + " (samples " + std::to_string(a.samples) + ")");
    }
    emit(7, "communication trends", v7, sweep_seconds);

    Verdict v8;
    for (const auto& run : sweep.runs)
      if (!run.report.failed)
        v8.require(run.report.cost >= 0.0, run.source + " seed " + std::to_string(run.seed) + " " +
                                               to_string(run.report.algorithm) + ": negative cost");
    for (const auto& src : spec.sources) {
      const double ca = row_of(sweep.rows, src.label, Algorithm::ca).cost;
      std::string line = src.label + " mean cost: ca=" + fmt(ca);
      for (auto a : kDecentralized) {
        const double c = row_of(sweep.rows, src.label, a).cost;
        v8.require(c >= ca, src.label + " " + to_string(a) + ": cost " + fmt(c) + " below CA " + fmt(ca));
        v8.require(c <= ca + 0.15, src.label + " " + to_string(a) + ": cost " + fmt(c) + " exceeds CA + 0.15");
        line += " " + to_string(a) + "=" + fmt(c);
      }
      line += " (failure ratio ca=" + fmt(row_of(sweep.rows, src.label, Algorithm::ca).failure_ratio) + ")";
      v8.note(line);
    }
    emit(8, "decentralized cost close to CA", v8, 0.0);
  }

  // 9. Corridor outcomes.
  {
    Verdict v;
    for (const auto& r : runs) {
      const std::string& label = r.instance->label;
      if (label.rfind("corridor", 0) != 0) continue;
      const bool expect_success = label == "corridor-wide-agent1-first";
      v.require(r.result.report.failed != expect_success,
                run_name(r) + (expect_success ? " failed" : " unexpectedly succeeded"));
    }
    v.note("corridor-wide-agent1-first succeeds; corridor-wide-agent2-first and both narrow orders fail; all algorithms");
    emit(9, "corridor outcomes", v, 0.0);
  }

  // 10. Determinism: rerun both experiments and compare bytes.
  {
    t0 = Clock::now();
    Verdict v;
    for (const auto& [spec, dir] : {std::pair{table1_spec(false), std::string("table1")},
                                    std::pair{random_sweep_spec(false), std::string("random-sweep")}}) {
      ExperimentSpec again = spec;
      again.out_dir = out / "repeat" / dir;
      run_experiment(again);
      v.require(slurp(out / dir / "aggregate.csv") == slurp(again.out_dir / "aggregate.csv"),
                dir + ": aggregate.csv differs");
      std::size_t files = 0;
      for (const auto& e : fs::directory_iterator(out / dir / "traces")) {
        ++files;
        v.require(slurp(e.path()) == slurp(again.out_dir / "traces" / e.path().filename()),
                  dir + ": trace " + e.path().filename().string() + " differs");
      }
      v.note(dir + ": aggregate.csv and " + std::to_string(files) + " traces byte-identical");
    }
    fs::remove_all(out / "repeat");
    emit(10, "determinism", v, since(t0));
  }

  // 11. Termination detection and the threaded runtime.
  {
    t0 = Clock::now();
    Verdict v;
    std::size_t checked = 0;
    for (const auto& r : runs) {
      if (r.algorithm == Algorithm::ca) continue;
      ++checked;
      v.require(r.result.report.termination_agrees, run_name(r) + ": activity after agent N's final mark");
    }
    const Scenario sc = gen_superconflict({10, 10}, 2.0, 8, desk_grid());
    const GridPlanner planner(sc);
    const SolutionSet ideal = ideal_solution(planner).solution;
    int threaded = 0;
    for (auto a : kDecentralized) {
      for (int rep = 0; rep < 20; ++rep) {
        const RunResult r = run_threaded(planner, a, {}, &ideal);
        const std::string name = "threaded " + to_string(a) + " repeat " + std::to_string(rep);
        ++threaded;
        v.require(!r.report.failed, name + ": failed");
        if (!r.report.failed) check_separation(v, r.solution, name);
        check_proofs(v, r, ideal, a, name);
      }
    }
    v.note(std::to_string(checked) + " simulated runs agree; " + std::to_string(threaded) +
           " threaded runs of the 8-agent superconflict pass the solution checks");
    emit(11, "termination detection and threaded runtime", v, since(t0));
  }

  std::printf("artifacts: %s\n", fs::absolute(out).string().c_str());
  std::printf("%s\n", all_pass ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all_pass ? 0 : 1;
}
