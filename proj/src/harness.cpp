#include "dpp/harness.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace dpp {

namespace {

GridSpec grid_param(const Json& params, const GridSpec& fallback) {
  if (!params.contains("grid")) return fallback;
  return grid_from_json(params["grid"]);
}

template <typename T>
T param(const Json& params, const char* key, T fallback) {
  if (!params.contains(key)) return fallback;
  try {
    return params[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument(std::string("parameter '") + key + "' has the wrong type");
  }
}

GridSpec desk_grid() { return GridSpec{30, 30, 20.0, 20.0, Connectivity::eight, {}}; }

std::string run_stem(const std::string& source, std::uint64_t seed, Algorithm a) {
  return source + "-s" + std::to_string(seed) + "-" + to_string(a);
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

Scenario make_scenario(const ScenarioSource& source, std::uint64_t seed) {
  const Json& p = source.params;
  const std::string& g = source.generator;
  Scenario sc;
  if (g == "superconflict") {
    const GridSpec grid = grid_param(p, paper_superconflict_grid());
    const Position c{param(p, "center_x", grid.world_width / 2), param(p, "center_y", grid.world_height / 2)};
    sc = gen_superconflict(c, param(p, "radius", 2.0), param(p, "n_agents", 8), grid, seed);
  } else if (g == "four-homogeneous" || g == "four-heterogeneous") {
    ClusterGeometry geo;
    geo.offset = param(p, "offset", geo.offset);
    geo.radius = param(p, "radius", geo.radius);
    geo.wide_radius = param(p, "wide_radius", geo.wide_radius);
    geo.narrow_radius = param(p, "narrow_radius", geo.narrow_radius);
    const GridSpec grid = grid_param(p, paper_superconflict_grid());
    sc = g == "four-homogeneous" ? gen_four_homogeneous(grid, seed, geo) : gen_four_heterogeneous(grid, seed, geo);
  } else if (g == "spiral") {
    sc = gen_spiral(grid_param(p, paper_superconflict_grid()), param(p, "n_agents", 8), param(p, "r_min", 2.0),
                    param(p, "r_max", 6.0), seed);
  } else if (g == "random") {
    if (!p.contains("n_agents")) throw InvalidArgument("random generator needs n_agents");
    sc = gen_random(grid_param(p, paper_random_grid()), param(p, "n_agents", 0), seed,
                    param(p, "min_distance", 5.0), param(p, "max_distance", 10.0));
  } else if (g == "corridor") {
    const auto order = param<std::string>(p, "order", "agent1_first");
    const auto width = param<std::string>(p, "width", "wide");
    if (order != "agent1_first" && order != "agent2_first") throw InvalidArgument("corridor order: " + order);
    if (width != "wide" && width != "narrow") throw InvalidArgument("corridor width: " + width);
    sc = gen_corridor(order == "agent1_first" ? CorridorOrder::agent1_first : CorridorOrder::agent2_first,
                      width == "wide" ? CorridorWidth::wide : CorridorWidth::narrow);
  } else if (g == "file") {
    sc = load_scenario(param<std::string>(p, "path", ""));
  } else {
    throw InvalidArgument("unknown scenario generator '" + g + "'");
  }
  if (!source.label.empty()) sc.label = source.label;
  return sc;
}

void ExperimentSpec::validate() const {
  if (sources.empty()) throw InvalidArgument("experiment has no scenario sources");
  if (algorithms.empty()) throw InvalidArgument("experiment has no algorithms");
  if (seeds.empty()) throw InvalidArgument("experiment needs at least one seed (repetition)");
  std::map<std::string, int> labels;
  for (const auto& s : sources) {
    if (s.label.empty()) throw InvalidArgument("every scenario source needs a label");
    if (++labels[s.label] > 1) throw InvalidArgument("duplicate scenario label '" + s.label + "'");
  }
  cost.validate();
}

ExperimentSpec experiment_from_json(const Json& j) {
  ExperimentSpec spec;
  spec.name = j.value("name", spec.name);
  if (!j.contains("sources") || !j["sources"].is_array()) throw FormatError("experiment needs a 'sources' list");
  for (const auto& s : j["sources"]) {
    ScenarioSource src;
    src.label = s.value("label", "");
    src.generator = s.value("generator", "");
    if (s.contains("params")) src.params = s["params"];
    spec.sources.push_back(src);
  }
  if (j.contains("algorithms")) {
    spec.algorithms.clear();
    for (const auto& a : j["algorithms"]) spec.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
  }
  if (j.contains("seeds")) {
    spec.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  } else if (j.contains("repetitions")) {
    const auto reps = j["repetitions"].get<int>();
    for (int k = 0; k < reps; ++k) spec.seeds.push_back(static_cast<std::uint64_t>(k));
  }
  if (j.contains("cost_model")) {
    const Json& c = j["cost_model"];
    spec.cost.mode = cost_mode_from_string(c.value("mode", "deterministic"));
    spec.cost.t_expand = c.value("t_expand", spec.cost.t_expand);
    spec.cost.t_handler = c.value("t_handler", spec.cost.t_handler);
  }
  spec.max_events = j.value("max_events", spec.max_events);
  if (j.contains("out_dir")) spec.out_dir = j["out_dir"].get<std::string>();
  spec.validate();
  return spec;
}

Json to_json(const ExperimentSpec& spec) {
  Json sources = Json::array();
  for (const auto& s : spec.sources)
    sources.push_back(Json{{"label", s.label}, {"generator", s.generator}, {"params", s.params}});
  Json algos = Json::array();
  for (auto a : spec.algorithms) algos.push_back(to_string(a));
  return Json{{"schema_version", kSchemaVersion}, {"name", spec.name},       {"sources", sources},
              {"algorithms", algos},               {"seeds", spec.seeds},     {"cost_model", to_json(spec.cost)},
              {"max_events", spec.max_events}};
}

void verify_solution(const SolutionSet& solution, double separation) {
  const auto [i, j] = first_conflict(solution, separation);
  if (i >= 0)
    throw SimulationError("solution violates the separation between agents " + std::to_string(i + 1) + " and " +
                          std::to_string(j + 1));
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& runs, const std::vector<Algorithm>& algorithms) {
  // Instance = (source, seed). It counts towards the means only if no algorithm failed on it.
  struct Instance {
    int n_agents = 0;
    std::map<Algorithm, const RunReport*> reports;
  };
  std::vector<std::string> order;
  std::map<std::string, std::map<std::uint64_t, Instance>> by_source;
  for (const auto& r : runs) {
    if (!by_source.contains(r.source)) order.push_back(r.source);
    auto& inst = by_source[r.source][r.seed];
    inst.n_agents = r.report.n_agents;
    inst.reports[r.report.algorithm] = &r.report;
  }
  std::vector<AggregateRow> rows;
  for (const auto& source : order) {
    const auto& instances = by_source[source];
    for (auto algo : algorithms) {
      AggregateRow row;
      row.scenario = source;
      row.algorithm = algo;
      std::size_t total = 0, failed = 0;
      double wall = 0, msgs = 0, cost = 0;
      for (const auto& [seed, inst] : instances) {
        row.n_agents = inst.n_agents;
        auto it = inst.reports.find(algo);
        if (it == inst.reports.end()) continue;
        ++total;
        if (it->second->failed) ++failed;
        bool all_ok = true;
        for (auto a : algorithms) {
          auto jt = inst.reports.find(a);
          if (jt == inst.reports.end() || jt->second->failed) all_ok = false;
        }
        if (!all_ok) continue;
        ++row.samples;
        wall += it->second->wallclock;
        msgs += static_cast<double>(it->second->messages);
        cost += it->second->cost;
      }
      const double k = static_cast<double>(row.samples);
      row.wallclock = row.samples ? wall / k : nan();
      row.messages = row.samples ? msgs / k : nan();
      row.cost = row.samples ? cost / k : nan();
      row.failure_ratio = total ? static_cast<double>(failed) / static_cast<double>(total) : nan();
      rows.push_back(row);
    }
  }
  return rows;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream os;
  os << "n_agents,algorithm,wallclock_s,messages,cost,failure_ratio,samples,scenario\n";
  for (const auto& r : rows) {
    os << r.n_agents << ',' << to_string(r.algorithm) << ',' << format_number(r.wallclock) << ','
       << format_number(r.messages) << ',' << format_number(r.cost) << ',' << format_number(r.failure_ratio) << ','
       << r.samples << ',' << r.scenario << '\n';
  }
  return os.str();
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult out;
  const bool write = !spec.out_dir.empty();
  if (write) write_json_file(spec.out_dir / "experiment.json", to_json(spec));

  auto flush = [&] {
    out.rows = aggregate(out.runs, spec.algorithms);
    out.csv = aggregate_csv(out.rows);
    if (!write) return;
    write_text_file(spec.out_dir / "aggregate.csv", out.csv);
    write_json_file(spec.out_dir / "aggregate.meta.json",
                    Json{{"schema_version", kSchemaVersion},
                         {"name", spec.name},
                         {"exclusion_rule",
                          "wallclock_s, messages and cost are means over instances (scenario, seed) on which every "
                          "listed algorithm returned a solution without failed agents; failure_ratio counts all "
                          "instances; samples is the number of instances in the means"},
                         {"runs", out.runs.size()}});
  };

  for (const auto& source : spec.sources) {
    for (auto seed : spec.seeds) {
      Algorithm algo = spec.algorithms.front();
      try {
        const Scenario sc = make_scenario(source, seed);
        const GridPlanner planner(sc);
        const SolutionSet ideal = ideal_solution(planner).solution;
        for (auto a : spec.algorithms) {
          algo = a;
          SimConfig cfg{spec.cost, seed, spec.max_events};
          RunResult r = run_algorithm(planner, algo, cfg, &ideal);
          r.report.scenario = source.label;
          verify_solution(r.solution, sc.separation);
          if (write && spec.write_runs) {
            const auto stem = run_stem(source.label, seed, algo);
            Json report = to_json(r.report);
            report["solution"] = solution_to_json(r.solution);
            write_json_file(spec.out_dir / "runs" / (stem + ".json"), report);
            std::ostringstream trace;
            write_trace(trace, r.trace);
            write_text_file(spec.out_dir / "traces" / (stem + ".jsonl"), trace.str());
          }
          out.runs.push_back(RunRecord{source.label, seed, std::move(r.report)});
        }
      } catch (const std::exception& e) {
        flush();
        throw ExperimentError("run failed (scenario " + source.label + ", seed " + std::to_string(seed) +
                              ", algorithm " + to_string(algo) + "): " + e.what());
      }
    }
  }
  flush();
  return out;
}

ExperimentSpec table1_spec(bool full) {
  ExperimentSpec spec;
  spec.name = full ? "table1-full" : "table1";
  const Json grid = to_json(full ? paper_superconflict_grid() : desk_grid());
  spec.sources = {
      ScenarioSource{"single-superconflict", "superconflict", Json{{"grid", grid}, {"n_agents", 8}, {"radius", 2.0}}},
      ScenarioSource{"four-homogeneous", "four-homogeneous", Json{{"grid", grid}}},
      ScenarioSource{"four-heterogeneous", "four-heterogeneous", Json{{"grid", grid}}},
      ScenarioSource{"spiral", "spiral", Json{{"grid", grid}}},
  };
  for (std::uint64_t s = 0; s < 10; ++s) spec.seeds.push_back(s);
  return spec;
}

ExperimentSpec random_sweep_spec(bool full) {
  ExperimentSpec spec;
  spec.name = full ? "random-sweep-full" : "random-sweep";
  std::vector<int> sizes = full ? std::vector<int>{30, 40, 50, 60, 70, 80, 90, 100} : std::vector<int>{10, 20, 30, 40};
  for (int n : sizes)
    spec.sources.push_back(ScenarioSource{"random-" + std::to_string(n), "random", Json{{"n_agents", n}}});
  for (std::uint64_t s = 1; s <= 10; ++s) spec.seeds.push_back(s);
  return spec;
}

}  // namespace dpp
