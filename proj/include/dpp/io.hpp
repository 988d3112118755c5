#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpp/des.hpp"
#include "dpp/scenario.hpp"
#include "dpp/trajectory.hpp"

namespace dpp {

inline constexpr int kSchemaVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

Json to_json(const GridSpec& g);
GridSpec grid_from_json(const Json& j);

Json to_json(const Scenario& s);
/// Throws FormatError on missing or mistyped fields, InvalidArgument on invalid content.
Scenario scenario_from_json(const Json& j);

/// {"breakpoints": [[t,x,y], ...]}; null for a failed path.
Json to_json(const Path& p);
Path path_from_json(const Json& j);

Json solution_to_json(const SolutionSet& s);
SolutionSet solution_from_json(const Json& j);

Json to_json(const CostModel& c);
Json to_json(const RunReport& r);
Json to_json(const ScheduleEntry& e);
Json schedule_to_json(const std::vector<ScheduleEntry>& schedule, const RunReport& report);

/// One JSON object per line: sim_time, sender, recipient, final, kind, payload_hash.
void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace);

/// Shortest decimal form that round-trips; used for CSV cells so reruns are byte-identical.
std::string format_number(double v);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const Scenario& s);

}  // namespace dpp
