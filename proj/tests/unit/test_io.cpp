#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "dpp/des.hpp"
#include "dpp/io.hpp"

using namespace dpp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "dpp_unit_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("scenario round-trip through a file") {
  for (const Scenario& sc : {gen_four_heterogeneous(paper_superconflict_grid(), 4),
                             gen_corridor(CorridorOrder::agent2_first, CorridorWidth::wide),
                             gen_random(paper_random_grid(), 20, 7)}) {
    const auto file = scratch("scenario.json");
    save_scenario(file, sc);
    const Scenario back = load_scenario(file);
    CHECK(back == sc);
    CHECK(to_json(back).dump() == to_json(sc).dump());
  }
}

TEST_CASE("scenario file layout") {
  const Json j = to_json(gen_corridor(CorridorOrder::agent1_first, CorridorWidth::narrow));
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["prng"] == "mt19937_64");
  CHECK(j["agents"][0]["start"] == Json::array({0, 1}));
  CHECK(j["grid"]["blocked"].size() == 14);
  CHECK_FALSE(to_json(paper_random_grid()).contains("blocked"));
}

TEST_CASE("malformed documents") {
  Json j = to_json(gen_corridor(CorridorOrder::agent1_first, CorridorWidth::narrow));
  Json bad = j;
  bad["schema_version"] = 99;
  CHECK_THROWS_AS(scenario_from_json(bad), FormatError);
  bad = j;
  bad.erase("agents");
  CHECK_THROWS_AS(scenario_from_json(bad), FormatError);
  bad = j;
  bad["agents"][0]["start"] = Json::array({0});
  CHECK_THROWS_AS(scenario_from_json(bad), FormatError);
  bad = j;
  bad["vmax"] = "fast";
  CHECK_THROWS_AS(scenario_from_json(bad), FormatError);
  bad = j;
  bad["agents"][1]["start"] = Json::array({0, 1});
  CHECK_THROWS_AS(scenario_from_json(bad), InvalidArgument);
  CHECK_THROWS_AS(read_json_file(scratch("missing.json")), FormatError);
  write_text_file(scratch("broken.json"), "{ not json");
  CHECK_THROWS_AS(read_json_file(scratch("broken.json")), FormatError);
  CHECK_THROWS_AS(path_from_json(Json{{"breakpoints", Json::array({Json::array({0, 1})})}}), FormatError);
  CHECK_THROWS_AS(path_from_json(Json{{"breakpoints", Json::array({Json::array({1, 0, 0})})}}), FormatError);
}

TEST_CASE("solution round-trip keeps failures and exact breakpoints") {
  const Scenario sc = gen_superconflict({10, 10}, 2.0, 8, paper_superconflict_grid());
  SolutionSet s = ca_solve(GridPlanner(sc)).solution;
  s.push_back(nullptr);
  const SolutionSet back = solution_from_json(Json::parse(solution_to_json(s).dump()));
  REQUIRE(back.size() == s.size());
  for (std::size_t k = 0; k + 1 < s.size(); ++k) CHECK(*back[k] == *s[k]);
  CHECK_FALSE(back.back());
}

TEST_CASE("run report") {
  const Scenario sc = gen_corridor(CorridorOrder::agent1_first, CorridorWidth::narrow);
  const auto r = run_algorithm(GridPlanner(sc), Algorithm::adpp, SimConfig{});
  const Json j = to_json(r.report);
  CHECK(j["failed"] == true);
  CHECK(j["cost"].is_null());
  CHECK(j["dur"].is_null());
  CHECK(j["algorithm"] == "adpp");
  CHECK(j["config"]["cost_model"]["mode"] == "deterministic");
  const Json s = schedule_to_json(r.schedule, r.report);
  CHECK(s["entries"].size() == r.schedule.size());
}

TEST_CASE("trace lines") {
  std::ostringstream os;
  write_trace(os, {TraceRecord{0.5, 1, 2, true, MessageKind::final_mark, 42}});
  const Json j = Json::parse(os.str());
  CHECK(j["sim_time"] == 0.5);
  CHECK(j["kind"] == "final_mark");
  CHECK(j["payload_hash"] == 42);
  CHECK(os.str().back() == '\n');
}

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(NAN) == "nan");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

}  // TEST_SUITE
