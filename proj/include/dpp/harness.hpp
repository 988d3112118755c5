#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpp/des.hpp"
#include "dpp/io.hpp"
#include "dpp/scenario.hpp"

namespace dpp {

/// Where the instances of one experiment row come from.
/// generator: superconflict | four-homogeneous | four-heterogeneous | spiral | random | corridor | file
struct ScenarioSource {
  std::string label;
  std::string generator;
  Json params = Json::object();
};

/// Builds the instance for one seed. Unknown generators or parameters throw InvalidArgument.
Scenario make_scenario(const ScenarioSource& source, std::uint64_t seed);

struct ExperimentSpec {
  std::string name = "experiment";
  std::vector<ScenarioSource> sources;
  std::vector<Algorithm> algorithms{Algorithm::ca, Algorithm::sdpp, Algorithm::adpp, Algorithm::iadpp};
  std::vector<std::uint64_t> seeds;
  CostModel cost;
  std::size_t max_events = SimConfig{}.max_events;
  std::filesystem::path out_dir;  // empty: keep everything in memory
  bool write_runs = true;          // per-run report JSON and message trace

  void validate() const;
};

ExperimentSpec experiment_from_json(const Json& j);
Json to_json(const ExperimentSpec& spec);

struct RunRecord {
  std::string source;
  std::uint64_t seed = 0;
  RunReport report;
};

struct AggregateRow {
  std::string scenario;
  int n_agents = 0;
  Algorithm algorithm = Algorithm::ca;
  double wallclock = 0.0;  // means over instances where every algorithm succeeded; NaN if none did
  double messages = 0.0;
  double cost = 0.0;
  double failure_ratio = 0.0;  // over all instances
  std::size_t samples = 0;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;
  std::vector<AggregateRow> rows;
  std::string csv;
};

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs every (source, seed, algorithm) combination and aggregates. With out_dir set, writes
/// aggregate.csv, aggregate.meta.json, runs/*.json and traces/*.jsonl. A run that throws
/// aborts the experiment with an ExperimentError naming the source, seed and algorithm.
ExperimentResult run_experiment(const ExperimentSpec& spec);

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& runs, const std::vector<Algorithm>& algorithms);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);

/// Throws SimulationError when two successful paths come closer than the separation.
void verify_solution(const SolutionSet& solution, double separation);

/// The four superconflict variants. Desk scale uses a 30x30 grid, full scale the paper's 60x60.
ExperimentSpec table1_spec(bool full = false);
/// Random scenarios on the 20x20 grid: n in {10,20,30,40}, or 30..100 when full.
ExperimentSpec random_sweep_spec(bool full = false);

}  // namespace dpp
