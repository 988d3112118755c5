#pragma once

#include <chrono>

#include "dpp/des.hpp"

namespace dpp {

struct ThreadedConfig {
  std::chrono::milliseconds timeout{60'000};
};

/// Runs SDPP, ADPP or IADPP with one OS thread per agent and in-memory FIFO channels.
/// Timings in the report are real seconds and vary between runs. Throws SimulationError
/// with a dump of every agent's state when the watchdog fires.
RunResult run_threaded(const Planner& planner, Algorithm algorithm, const ThreadedConfig& config = {},
                       const SolutionSet* ideal = nullptr);

}  // namespace dpp
