// JSON-string bridge; the Python package wraps these with json.loads/json.dumps.

#include <pybind11/pybind11.h>

#include <sstream>

#include "dpp/harness.hpp"
#include "dpp/threaded.hpp"

namespace py = pybind11;
using namespace dpp;

namespace {

CostModel cost_from(const Json& j) {
  CostModel c;
  if (j.is_null()) return c;
  c.mode = cost_mode_from_string(j.value("mode", "deterministic"));
  c.t_expand = j.value("t_expand", c.t_expand);
  c.t_handler = j.value("t_handler", c.t_handler);
  if (j.contains("plan_cost")) c.plan_cost = j["plan_cost"].get<std::vector<double>>();
  c.validate();
  return c;
}

std::string generate(const std::string& generator, std::uint64_t seed, const std::string& params) {
  return to_json(make_scenario(ScenarioSource{"", generator, Json::parse(params)}, seed)).dump();
}

std::string solve(const std::string& scenario, const std::string& algorithm, std::uint64_t seed,
                  const std::string& cost_model, bool threaded, std::size_t max_events) {
  const Scenario sc = scenario_from_json(Json::parse(scenario));
  const Algorithm algo = algorithm_from_string(algorithm);
  const GridPlanner planner(sc);
  const SolutionSet ideal = ideal_solution(planner).solution;
  RunResult r;
  {
    py::gil_scoped_release release;
    r = threaded ? run_threaded(planner, algo, {}, &ideal)
                 : run_algorithm(planner, algo, SimConfig{cost_from(Json::parse(cost_model)), seed, max_events}, &ideal);
  }
  r.report.scenario = sc.label;
  verify_solution(r.solution, sc.separation);
  std::ostringstream trace;
  write_trace(trace, r.trace);
  Json records = Json::array();
  std::istringstream lines(trace.str());
  for (std::string line; std::getline(lines, line);) records.push_back(Json::parse(line));
  return Json{{"report", to_json(r.report)},
              {"solution", solution_to_json(r.solution)},
              {"schedule", schedule_to_json(r.schedule, r.report)},
              {"trace", records}}
      .dump();
}

std::string plan_single(const std::string& scenario, int agent, const std::string& avoids) {
  const Scenario sc = scenario_from_json(Json::parse(scenario));
  const GridPlanner planner(sc);
  std::vector<Path> paths;
  for (const auto& a : Json::parse(avoids))
    if (auto p = path_from_json(a)) paths.push_back(p);
  const PlanResult r = planner.plan(agent, paths);
  return Json{{"path", to_json(r.path)},
              {"dest_time", r.path ? Json(r.path->dest_time()) : Json(nullptr)},
              {"expansions", r.expansions},
              {"horizon", r.horizon}}
      .dump();
}

std::string experiment(const std::string& spec) {
  ExperimentResult res;
  const ExperimentSpec s = experiment_from_json(Json::parse(spec));
  {
    py::gil_scoped_release release;
    res = run_experiment(s);
  }
  Json runs = Json::array();
  for (const auto& r : res.runs) runs.push_back(Json{{"source", r.source}, {"seed", r.seed}, {"report", to_json(r.report)}});
  return Json{{"csv", res.csv}, {"runs", runs}}.dump();
}

bool conflict(const std::string& a, const std::string& b, double separation) {
  const Path pa = path_from_json(Json::parse(a)), pb = path_from_json(Json::parse(b));
  if (!pa || !pb) throw InvalidArgument("in_conflict needs two paths");
  return in_conflict(*pa, *pb, separation);
}

}  // namespace

PYBIND11_MODULE(_dpp, m) {
  m.doc() = "Prioritized cooperative pathfinding: planners, simulator and experiment harness";
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);
  py::register_exception<ExperimentError>(m, "ExperimentError", PyExc_RuntimeError);
  m.def("generate", &generate, py::arg("generator"), py::arg("seed"), py::arg("params"));
  m.def("solve", &solve, py::arg("scenario"), py::arg("algorithm"), py::arg("seed"), py::arg("cost_model"),
        py::arg("threaded"), py::arg("max_events"));
  m.def("plan_single", &plan_single, py::arg("scenario"), py::arg("agent"), py::arg("avoids"));
  m.def("experiment", &experiment, py::arg("spec"));
  m.def("in_conflict", &conflict, py::arg("a"), py::arg("b"), py::arg("separation"));
  m.attr("SCHEMA_VERSION") = kSchemaVersion;
}
