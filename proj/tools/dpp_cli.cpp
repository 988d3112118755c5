// Command-line front end: scenario generation, single runs, experiment batches.
// Exit codes: 0 success, 2 some agent ended with no path, 1 error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "dpp/harness.hpp"
#include "dpp/io.hpp"
#include "dpp/threaded.hpp"

namespace fs = std::filesystem;
using namespace dpp;

namespace {

struct CostFlags {
  std::string mode = "deterministic";
  double t_expand = CostModel{}.t_expand;
  double t_handler = CostModel{}.t_handler;
  std::size_t max_events = SimConfig{}.max_events;

  void add(CLI::App* app) {
    app->add_option("--cost-model", mode, "deterministic|measured")->capture_default_str();
    app->add_option("--t-expand", t_expand, "simulated seconds per planner expansion")->capture_default_str();
    app->add_option("--t-handler", t_handler, "simulated seconds per check without replanning")
        ->capture_default_str();
    app->add_option("--max-events", max_events, "event limit before a run is declared livelocked")
        ->capture_default_str();
  }

  CostModel model() const {
    CostModel c;
    c.mode = cost_mode_from_string(mode);
    c.t_expand = t_expand;
    c.t_handler = t_handler;
    c.validate();
    return c;
  }
};

void print_rows(const std::vector<AggregateRow>& rows) {
  std::printf("%-22s %8s %-6s %14s %10s %8s %8s %7s\n", "scenario", "n", "algo", "wallclock_s", "messages", "cost",
              "failed", "samples");
  for (const auto& r : rows) {
    std::printf("%-22s %8d %-6s %14.6g %10.1f %8.4f %8.2f %7zu\n", r.scenario.c_str(), r.n_agents,
                to_string(r.algorithm).c_str(), r.wallclock, r.messages, r.cost, r.failure_ratio, r.samples);
  }
}

int run_batch(ExperimentSpec spec, const std::string& out, const CostFlags& flags, bool cost_given) {
  if (!out.empty()) spec.out_dir = out;
  if (cost_given) spec.cost = flags.model();
  spec.max_events = flags.max_events;
  const auto result = run_experiment(spec);
  print_rows(result.rows);
  if (!spec.out_dir.empty()) std::printf("wrote %s\n", (spec.out_dir / "aggregate.csv").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized prioritized planning toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a scenario file");
  std::string generator, gen_out, order = "agent1_first", width = "wide", connectivity;
  std::uint64_t gen_seed = 0;
  int n_agents = 8, cells = 0;
  double radius = 2.0;
  gen->add_option("generator", generator,
                  "superconflict|four-homogeneous|four-heterogeneous|spiral|random|corridor")
      ->required();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--n-agents", n_agents)->capture_default_str();
  gen->add_option("--radius", radius, "superconflict circle radius (m)")->capture_default_str();
  gen->add_option("--cells", cells, "grid vertices per side (default: generator's own grid)");
  gen->add_option("--connectivity", connectivity, "four|eight");
  gen->add_option("--order", order, "corridor: agent1_first|agent2_first")->capture_default_str();
  gen->add_option("--width", width, "corridor: narrow|wide")->capture_default_str();
  gen->add_option("--out", gen_out, "output file (default: stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve one scenario file");
  std::string scenario_file, algorithm = "adpp", solve_out;
  std::uint64_t solve_seed = 0;
  bool threaded = false;
  CostFlags solve_cost;
  solve->add_option("scenario", scenario_file)->required()->check(CLI::ExistingFile);
  solve->add_option("--algorithm", algorithm, "ca|sdpp|adpp|iadpp")->capture_default_str();
  solve->add_option("--seed", solve_seed)->capture_default_str();
  solve->add_option("--out", solve_out, "output directory");
  solve->add_flag("--threaded", threaded, "run on OS threads instead of the simulator");
  solve_cost.add(solve);

  // solve-single
  auto* single = app.add_subcommand("solve-single", "plan one agent against fixed avoids");
  std::string single_scenario, avoid_file, single_out;
  int agent = 1;
  single->add_option("scenario", single_scenario)->required()->check(CLI::ExistingFile);
  single->add_option("--agent", agent, "priority of the planning agent")->capture_default_str();
  single->add_option("--avoid", avoid_file, "solution file; paths of agents above --agent become avoids")
      ->check(CLI::ExistingFile);
  single->add_option("--out", single_out, "output file (default: stdout)");

  // experiment / presets
  auto* experiment = app.add_subcommand("experiment", "run an experiment spec file");
  std::string spec_file, exp_out;
  CostFlags exp_cost;
  experiment->add_option("spec", spec_file)->required()->check(CLI::ExistingFile);
  experiment->add_option("--out", exp_out, "output directory (overrides the spec)");
  exp_cost.add(experiment);

  auto* table1 = app.add_subcommand("table1", "the four superconflict variants, 10 seeds");
  std::string t1_out;
  bool t1_full = false;
  CostFlags t1_cost;
  table1->add_option("--out", t1_out, "output directory");
  table1->add_flag("--full", t1_full, "paper-scale 60x60 grid");
  t1_cost.add(table1);

  auto* sweep = app.add_subcommand("random-sweep", "random scenarios over a range of agent counts");
  std::string sw_out;
  bool sw_full = false;
  CostFlags sw_cost;
  sweep->add_option("--out", sw_out, "output directory");
  sweep->add_flag("--full", sw_full, "n = 30..100 instead of 10..40");
  sw_cost.add(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      Json params = Json::object();
      params["n_agents"] = n_agents;
      params["radius"] = radius;
      params["order"] = order;
      params["width"] = width;
      if (cells > 0 || !connectivity.empty()) {
        GridSpec g = generator == "random" ? paper_random_grid() : paper_superconflict_grid();
        if (cells > 0) g.width_cells = g.height_cells = cells;
        if (!connectivity.empty()) g.connectivity = connectivity_from_string(connectivity);
        params["grid"] = to_json(g);
      }
      const Scenario sc = make_scenario(ScenarioSource{"", generator, params}, gen_seed);
      if (gen_out.empty()) {
        std::cout << to_json(sc).dump(2) << "\n";
      } else {
        save_scenario(gen_out, sc);
      }
      return 0;
    }

    if (*solve) {
      const Algorithm algo = algorithm_from_string(algorithm);
      const Scenario sc = load_scenario(scenario_file);
      const GridPlanner planner(sc);
      const SolutionSet ideal = ideal_solution(planner).solution;
      RunResult r;
      if (threaded) {
        r = run_threaded(planner, algo, {}, &ideal);
      } else {
        r = run_algorithm(planner, algo, SimConfig{solve_cost.model(), solve_seed, solve_cost.max_events}, &ideal);
      }
      r.report.scenario = sc.label;
      verify_solution(r.solution, sc.separation);
      if (!solve_out.empty()) {
        const fs::path dir = solve_out;
        write_json_file(dir / "solution.json", solution_to_json(r.solution));
        write_json_file(dir / "report.json", to_json(r.report));
        write_json_file(dir / "schedule.json", schedule_to_json(r.schedule, r.report));
        std::ostringstream trace;
        write_trace(trace, r.trace);
        write_text_file(dir / "trace.jsonl", trace.str());
      }
      std::cout << to_json(r.report).dump(2) << "\n";
      return r.report.failed ? 2 : 0;
    }

    if (*single) {
      const Scenario sc = load_scenario(single_scenario);
      const GridPlanner planner(sc);
      std::vector<Path> avoids;
      if (!avoid_file.empty()) {
        const SolutionSet given = solution_from_json(read_json_file(avoid_file));
        for (int j = 1; j < agent && j <= static_cast<int>(given.size()); ++j)
          if (given[j - 1]) avoids.push_back(given[j - 1]);
      }
      const PlanResult res = planner.plan(agent, avoids);
      const Json out{{"schema_version", kSchemaVersion},
                     {"agent", agent},
                     {"avoids", avoids.size()},
                     {"expansions", res.expansions},
                     {"horizon", res.horizon},
                     {"dest_time", res.path ? Json(res.path->dest_time()) : Json(nullptr)},
                     {"path", to_json(res.path)}};
      if (single_out.empty()) {
        std::cout << out.dump(2) << "\n";
      } else {
        write_json_file(single_out, out);
      }
      return res.path ? 0 : 2;
    }

    if (*experiment) {
      ExperimentSpec spec = experiment_from_json(read_json_file(spec_file));
      return run_batch(spec, exp_out, exp_cost, experiment->count("--cost-model") + experiment->count("--t-expand") +
                                                    experiment->count("--t-handler") > 0);
    }
    if (*table1) return run_batch(table1_spec(t1_full), t1_out, t1_cost, true);
    if (*sweep) return run_batch(random_sweep_spec(sw_full), sw_out, sw_cost, true);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
