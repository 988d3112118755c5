#include "dpp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dpp {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return field<T>(j, key);
}

Json vertex_json(const Vertex& v) { return Json::array({v.col, v.row}); }

Vertex vertex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw FormatError("vertex must be [col, row]");
  return Vertex{j[0].get<int>(), j[1].get<int>()};
}

void check_schema(const Json& j) {
  if (j.contains("schema_version") && j["schema_version"] != kSchemaVersion)
    throw FormatError("unsupported schema_version " + j["schema_version"].dump());
}

// NaN/inf are not JSON; write them as null.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const GridSpec& g) {
  Json j{{"width_cells", g.width_cells},
         {"height_cells", g.height_cells},
         {"world_width", g.world_width},
         {"world_height", g.world_height},
         {"connectivity", to_string(g.connectivity)}};
  if (!g.blocked.empty()) {
    Json b = Json::array();
    for (const auto& v : g.blocked) b.push_back(vertex_json(v));
    j["blocked"] = b;
  }
  return j;
}

GridSpec grid_from_json(const Json& j) {
  GridSpec g;
  g.width_cells = field<int>(j, "width_cells");
  g.height_cells = field<int>(j, "height_cells");
  g.world_width = field<double>(j, "world_width");
  g.world_height = field<double>(j, "world_height");
  g.connectivity = connectivity_from_string(field<std::string>(j, "connectivity"));
  if (j.contains("blocked")) {
    if (!j["blocked"].is_array()) throw FormatError("'blocked' must be a list of [col, row]");
    for (const auto& v : j["blocked"]) g.blocked.push_back(vertex_from(v));
  }
  g.validate();
  return g;
}

Json to_json(const Scenario& s) {
  Json agents = Json::array();
  for (const auto& a : s.agents) {
    Json aj{{"start", vertex_json(a.start)}, {"dest", vertex_json(a.dest)}};
    if (a.cluster != 0) aj["cluster"] = a.cluster;
    agents.push_back(aj);
  }
  return Json{{"schema_version", kSchemaVersion},
              {"label", s.label},
              {"grid", to_json(s.grid)},
              {"vmax", s.v_max},
              {"wait", s.wait_duration},
              {"separation", s.separation},
              {"seed", s.seed},
              {"prng", s.prng},
              {"agents", agents}};
}

Scenario scenario_from_json(const Json& j) {
  check_schema(j);
  Scenario s;
  s.grid = grid_from_json(field<Json>(j, "grid"));
  s.v_max = field_or<double>(j, "vmax", s.v_max);
  s.wait_duration = field_or<double>(j, "wait", s.wait_duration);
  s.separation = field_or<double>(j, "separation", s.separation);
  s.seed = field_or<std::uint64_t>(j, "seed", 0);
  s.label = field_or<std::string>(j, "label", "");
  s.prng = field_or<std::string>(j, "prng", s.prng);
  const Json agents = field<Json>(j, "agents");
  if (!agents.is_array()) throw FormatError("'agents' must be a list");
  for (const auto& a : agents)
    s.agents.push_back(AgentTask{vertex_from(field<Json>(a, "start")), vertex_from(field<Json>(a, "dest")),
                                 field_or<int>(a, "cluster", 0)});
  s.validate();
  return s;
}

Json to_json(const Path& p) {
  if (!p) return nullptr;
  Json bps = Json::array();
  for (const auto& b : p->breakpoints()) bps.push_back(Json::array({b.t, b.pos.x, b.pos.y}));
  return Json{{"breakpoints", bps}};
}

Path path_from_json(const Json& j) {
  if (j.is_null()) return nullptr;
  const Json bps = field<Json>(j, "breakpoints");
  if (!bps.is_array()) throw FormatError("'breakpoints' must be a list");
  std::vector<Breakpoint> out;
  for (const auto& b : bps) {
    if (!b.is_array() || b.size() != 3) throw FormatError("breakpoint must be [t, x, y]");
    out.push_back(Breakpoint{b[0].get<double>(), Position{b[1].get<double>(), b[2].get<double>()}});
  }
  try {
    return std::make_shared<const Trajectory>(std::move(out));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid trajectory: ") + e.what());
  }
}

Json solution_to_json(const SolutionSet& s) {
  Json paths = Json::array();
  for (const auto& p : s) paths.push_back(to_json(p));
  return Json{{"schema_version", kSchemaVersion}, {"paths", paths}};
}

SolutionSet solution_from_json(const Json& j) {
  check_schema(j);
  const Json paths = field<Json>(j, "paths");
  if (!paths.is_array()) throw FormatError("'paths' must be a list");
  SolutionSet out;
  for (const auto& p : paths) out.push_back(path_from_json(p));
  return out;
}

Json to_json(const CostModel& c) {
  Json j{{"mode", to_string(c.mode)}, {"t_expand", c.t_expand}, {"t_handler", c.t_handler}};
  if (!c.plan_cost.empty()) j["plan_cost"] = c.plan_cost;
  return j;
}

Json to_json(const RunReport& r) {
  return Json{{"schema_version", kSchemaVersion},
              {"algorithm", to_string(r.algorithm)},
              {"scenario", r.scenario},
              {"n_agents", r.n_agents},
              {"wallclock_s", r.wallclock},
              {"messages", r.messages},
              {"dur", num(r.dur)},
              {"cost", num(r.cost)},
              {"failed", r.failed},
              {"expansions", r.expansions},
              {"broadcasts", r.broadcasts},
              {"plans", r.plans},
              {"iterations", r.iterations},
              {"restarts", r.restarts},
              {"events", r.events},
              {"termination_time", num(r.termination_time)},
              {"termination_agrees", r.termination_agrees},
              {"config", Json{{"seed", r.seed}, {"cost_model", to_json(r.cost_model)}, {"horizon", r.horizon_base}}}};
}

Json to_json(const ScheduleEntry& e) {
  return Json{{"agent", e.agent}, {"start", e.start}, {"end", e.end}, {"activity", e.activity},
              {"iteration", e.iteration}};
}

Json schedule_to_json(const std::vector<ScheduleEntry>& schedule, const RunReport& report) {
  Json entries = Json::array();
  for (const auto& e : schedule) entries.push_back(to_json(e));
  return Json{{"schema_version", kSchemaVersion},
              {"algorithm", to_string(report.algorithm)},
              {"scenario", report.scenario},
              {"n_agents", report.n_agents},
              {"wallclock_s", report.wallclock},
              {"entries", entries}};
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace) {
  for (const auto& r : trace) {
    const Json j{{"sim_time", r.time},
                 {"sender", r.sender},
                 {"recipient", r.recipient},
                 {"final", r.final},
                 {"kind", r.kind == MessageKind::inform ? "inform" : "final_mark"},
                 {"payload_hash", r.payload_hash}};
    out << j.dump() << '\n';
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

Scenario load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_json_file(path)); }

void save_scenario(const std::filesystem::path& path, const Scenario& s) { write_json_file(path, to_json(s)); }

}  // namespace dpp
