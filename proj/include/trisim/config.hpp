#pragma once
// JSON run configuration: one table per module (model/kernel/energy/dyn/init/
// run/sweep), defaults from the parameter structs, unknown keys rejected by
// name, and dotted sweep axes ("dyn.T_0") applied to parameter copies.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "trisim/params.hpp"

namespace trisim {

struct RunConfig {
  ModelParams model;
  double horizon = 1.0;
  int stride = 1;
  std::uint64_t seed = 1;
  std::string out_dir;  // empty: CLI --out flag or a derived default
  int workers = 1;
  // Sweep axes in declaration order: dotted parameter name -> values.
  std::vector<std::pair<std::string, std::vector<double>>> sweep_axes;
  int replicates = 1;  // independent seeds per sweep point
};

// Parse + default + validate. Unknown tables or keys and range violations
// throw std::invalid_argument naming the offender.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// Complete canonical echo: every parameter explicit, reproduces the run.
nlohmann::json config_to_json(const RunConfig& rc);

// Set one scalar parameter by dotted name; throws on unknown names.
void apply_axis(ModelParams& mp, const std::string& name, double value);

}  // namespace trisim
