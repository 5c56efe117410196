// Snapshot and hypergraph JSON round-trips (bit-exact doubles), CSV writers
// with quoting, and every malformed-input rejection path.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "trisim/dynamics.hpp"
#include "trisim/serialize.hpp"

using namespace trisim;
using nlohmann::json;

namespace {

ModelParams churn_params() {
  ModelParams mp;
  mp.n_agents = 4;
  mp.m = 2;
  mp.init.triads = {{0, 1, 2}, {1, 2, 3}};
  mp.init.birth_headroom = 1;
  mp.init.M_0 = 0.3;
  mp.init.M_jitter = 0.2;
  mp.dyn.rate_role = 20.0;
  mp.dyn.rate_exchange = 20.0;
  mp.dyn.kappa_K = 0.5;
  return mp;
}

// A short noisy run: every stored double ends up non-trivial.
Configuration evolved_config() {
  auto mp = churn_params();
  return simulate(init_configuration(mp, 801), mp, 0.2, 803);
}

std::string temp_path(const char* name) {
  return std::string("/tmp/") + name;
}

}  // namespace

TEST_CASE("format_double emits the shortest exact decimal form") {
  const double values[] = {0.1,    1.0 / 3.0, 6.31,  1e-300, -2.5e-8,
                           1.0,    0.0,       -42.0, M_PI,   12345.678901234567};
  for (double x : values) {
    const std::string s = format_double(x);
    CHECK(json::parse(s).get<double>() == x);  // bitwise identical
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1.0");
}

TEST_CASE("hypergraph JSON round-trip preserves triads and weights") {
  TriadicHypergraph h(5);
  h.add_triad({0, 1, 2});
  h.add_triad({1, 2, 3});
  h.set_weight(1, 2, 1.7);
  h.set_weight(0, 1, 0.25);

  auto h2 = hypergraph_from_json(hypergraph_to_json(h));
  CHECK(h2.n_agents() == 5);
  CHECK(h2.triads() == h.triads());
  CHECK(h2.weight(1, 2) == 1.7);
  CHECK(h2.weight(0, 1) == 0.25);
  CHECK(h2.weight(0, 2) == 1.0);
  // Serialized form is itself stable.
  CHECK(hypergraph_to_json(h2).dump() == hypergraph_to_json(h).dump());

  auto j = hypergraph_to_json(h);
  j["triads"][0] = {0, 1};
  CHECK_THROWS_WITH_AS(hypergraph_from_json(j),
                       "triad entries must be 3-element arrays",
                       std::invalid_argument);
  j = hypergraph_to_json(h);
  j["edge_weights"]["xyz"] = 2.0;
  CHECK_THROWS_WITH_AS(hypergraph_from_json(j), "bad edge key: xyz",
                       std::invalid_argument);
}

TEST_CASE("snapshot round-trip is byte-identical after one cycle") {
  const auto mp = churn_params();
  const auto c = evolved_config();

  const std::string s1 = snapshot_to_json(c).dump();
  const auto c2 = snapshot_from_json(json::parse(s1), mp);
  CHECK(snapshot_to_json(c2).dump() == s1);

  CHECK(c2.time == c.time);
  CHECK(c2.reservoir == c.reservoir);
  CHECK(c2.q1() == c.q1());
  CHECK(c2.q2() == c.q2());
  CHECK(c2.q3() == c.q3());
  CHECK(c2.q1_init == c.q1_init);
  CHECK(c2.q2_init == c.q2_init);
  CHECK(c2.hyper.triads() == c.hyper.triads());
  CHECK(validate(c2, mp).empty());
}

TEST_CASE("snapshot loader rejects every shape violation") {
  const auto mp = churn_params();
  const auto c = evolved_config();
  const json base = snapshot_to_json(c);

  auto load = [&mp](const json& j) { return snapshot_from_json(j, mp); };

  ModelParams small = mp;
  small.n_agents = 3;
  CHECK_THROWS_WITH_AS(snapshot_from_json(base, small),
                       "snapshot agent count differs from parameters",
                       std::invalid_argument);

  json j = base;
  j["agents"][0]["knowledge"].erase(0);
  CHECK_THROWS_WITH_AS(load(j), "knowledge grid size mismatch",
                       std::invalid_argument);

  j = base;
  j["agents"][1]["opinion"][0] = 2;
  CHECK_THROWS_WITH_AS(load(j), "opinion entries must be +1/-1",
                       std::invalid_argument);

  j = base;
  j["agents"][1]["opinion"].push_back(1);
  CHECK_THROWS_WITH_AS(load(j), "opinion length mismatch",
                       std::invalid_argument);

  j = base;
  j["agents"].erase(3);
  CHECK_THROWS_WITH_AS(load(j), "agent list length mismatch",
                       std::invalid_argument);

  j = base;
  j["blocks"][0]["G1"].erase(0);
  CHECK_THROWS_WITH_AS(load(j), "adversarial vector dimension mismatch",
                       std::invalid_argument);

  j = base;
  j["blocks"].erase(0);
  CHECK_THROWS_WITH_AS(load(j), "active triad without a block",
                       std::invalid_argument);

  j = base;
  auto spare = j["blocks"][0];
  spare["triad"] = {0, 1, 3};  // not an active triad in this configuration
  j["blocks"].push_back(spare);
  CHECK_THROWS_WITH_AS(load(j), "block for an inactive triad",
                       std::invalid_argument);

  j = base;
  j["edge_filt"]["0-3"] = j["global_filt"];
  CHECK_THROWS_WITH_AS(load(j), "filter channel for a missing edge: 0-3",
                       std::invalid_argument);

  j = base;
  j["edge_filt"].erase(j["edge_filt"].begin());
  CHECK_THROWS_AS(load(j), std::invalid_argument);  // edge without a channel

  j = base;
  j["global_filt"].erase(0);
  CHECK_THROWS_WITH_AS(load(j), "filter state has wrong component count",
                       std::invalid_argument);
}

TEST_CASE("event log CSV quotes exactly the fields that need it") {
  EventLog log;
  log.push_back({0.5, "exchange", 2, "0-1-2", "plain"});
  log.push_back({1.25, "role", -1, "", "a,b"});
  log.push_back({2.0, "flip", 0, "", "say \"hi\""});
  log.push_back({3.0, "birth", 1, "", "line1\nline2"});

  const auto path = temp_path("trisim_events_test.csv");
  write_event_log_csv(path, log);
  const std::string text = read_text_file(path);
  CHECK(text ==
        "time,kind,agent,triad,detail\n"
        "0.5,exchange,2,0-1-2,plain\n"
        "1.25,role,-1,,\"a,b\"\n"
        "2.0,flip,0,,\"say \"\"hi\"\"\"\n"
        "3.0,birth,1,,\"line1\nline2\"\n");
  std::remove(path.c_str());

  CHECK_THROWS_AS(write_event_log_csv("/nonexistent_dir_q/x.csv", log),
                  std::runtime_error);
}

TEST_CASE("observables CSV pairs a time column with named series") {
  const auto path = temp_path("trisim_obs_test.csv");
  write_observables_csv(path, {0.0, 0.5},
                        {{"psi", {1.5, 2.5}}, {"c,ol", {-1.0, 0.25}}});
  CHECK(read_text_file(path) ==
        "time,psi,\"c,ol\"\n"
        "0.0,1.5,-1.0\n"
        "0.5,2.5,0.25\n");
  std::remove(path.c_str());

  CHECK_THROWS_WITH_AS(
      write_observables_csv(path, {0.0, 0.5}, {{"psi", {1.0}}}),
      "column length mismatch: psi", std::invalid_argument);
}

TEST_CASE("text file helpers round-trip binary-safe content") {
  const auto path = temp_path("trisim_text_test.bin");
  const std::string payload = "alpha\nbeta\r\n\ttail";
  write_text_file(path, payload);
  CHECK(read_text_file(path) == payload);
  std::remove(path.c_str());

  CHECK_THROWS_AS(read_text_file("/tmp/definitely_missing_trisim_file"),
                  std::runtime_error);
}
