#pragma once
// Snapshot / hypergraph JSON round-trips (bit-exact doubles), event-log CSV,
// and the observables CSV writer. All doubles are emitted in the shortest
// form that parses back to the identical bits.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "trisim/agent.hpp"
#include "trisim/dynamics.hpp"

namespace trisim {

// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

nlohmann::json hypergraph_to_json(const TriadicHypergraph& h);
TriadicHypergraph hypergraph_from_json(const nlohmann::json& j);

nlohmann::json snapshot_to_json(const Configuration& c);
// Requires the model parameters to size the knowledge grid, opinion vectors,
// and kernel channels consistently; throws on any shape mismatch.
Configuration snapshot_from_json(const nlohmann::json& j,
                                 const ModelParams& mp);

// CSV with header time,kind,agent,triad,detail. Fields containing commas,
// quotes, or newlines are quoted.
void write_event_log_csv(const std::string& path, const EventLog& log);

// CSV with time first and one column per named series; all columns must have
// the same length as times.
void write_observables_csv(
    const std::string& path, const std::vector<double>& times,
    const std::vector<std::pair<std::string, std::vector<double>>>& columns);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace trisim
