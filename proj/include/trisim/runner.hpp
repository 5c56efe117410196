#pragma once
// Run / sweep orchestration: artifact directories with config echo, event log,
// observables CSV, summary JSON (stationary-window statistics, conservation
// drifts, timescale-hierarchy warnings), and the final snapshot. Sweeps fan
// out over the Cartesian product of axes with per-point seeds and optional
// worker threads.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "trisim/agent.hpp"
#include "trisim/config.hpp"

namespace trisim {

struct RunResult {
  std::string dir;
  Configuration final_config;
  std::vector<double> times;
  // Fixed column order; first six are the order parameters.
  std::vector<std::pair<std::string, std::vector<double>>> series;
  nlohmann::json summary;
};

// Executes one seeded run and writes config.json, events.csv,
// observables.csv, summary.json, snapshot.json into out_dir. Refuses to
// overwrite an existing observables.csv.
RunResult run_simulation(const RunConfig& rc, const std::string& out_dir);

// Cartesian product of the config's sweep axes x replicates; each point runs
// independently (seed = base seed XOR global point index) in its own
// subdirectory. Failures are recorded and skipped. Writes sweep.csv and
// sweep_summary.json; returns the summary.
nlohmann::json sweep_simulation(const RunConfig& rc, const std::string& out_dir);

}  // namespace trisim
