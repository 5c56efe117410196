// End-to-end checks of the command-line binary: artifact layout, exit codes,
// deterministic reruns, the exact-enumeration oracle, and snapshot validation.
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "trisim/serialize.hpp"

using namespace trisim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* kCli = TRISIM_CLI_PATH;

// Runs the binary with `args`, captures stdout+stderr, returns the exit code.
int run_cli(const std::string& args, std::string* output = nullptr) {
  const std::string cap = "/tmp/trisim_cli_capture.txt";
  const std::string cmd =
      std::string(kCli) + " " + args + " > " + cap + " 2>&1";
  int status = std::system(cmd.c_str());
  if (output) *output = read_text_file(cap);
  int code = -1;
  if (WIFEXITED(status)) code = WEXITSTATUS(status);
  return code;
}

fs::path fresh_dir(const char* name) {
  fs::path p = fs::path("/tmp") / name;
  fs::remove_all(p);
  return p;
}

std::string write_config(const char* name, const json& j) {
  const std::string path = (fs::path("/tmp") / name).string();
  write_text_file(path, j.dump(2));
  return path;
}

json small_run_config() {
  return json{
      {"model", {{"n_agents", 4}}},
      {"init", {{"triads", {{0, 1, 2}, {1, 2, 3}}}, {"birth_headroom", 1}}},
      {"dyn", {{"rate_role", 10.0}, {"rate_exchange", 10.0}}},
      {"run", {{"horizon", 0.1}, {"stride", 10}, {"seed", 42}}}};
}

}  // namespace

TEST_CASE("run writes the full artifact set and reports its directory") {
  const auto cfg = write_config("trisim_cli_run.json", small_run_config());
  const auto dir = fresh_dir("trisim_cli_run_out");

  std::string out;
  REQUIRE(run_cli("run " + cfg + " --out " + dir.string(), &out) == 0);
  CHECK(out == dir.string() + "\n");
  for (const char* f : {"config.json", "events.csv", "observables.csv",
                        "summary.json", "snapshot.json"})
    CHECK(fs::exists(dir / f));

  // The echoed config reproduces the run parameters.
  const json echo = json::parse(read_text_file((dir / "config.json").string()));
  CHECK(echo.at("run").at("seed") == 42);
  CHECK(echo.at("model").at("n_agents") == 4);

  // Observables: header plus start + 10 strided samples of 100 steps.
  const std::string obs = read_text_file((dir / "observables.csv").string());
  CHECK(obs.rfind("time,", 0) == 0);
  const auto rows = std::count(obs.begin(), obs.end(), '\n');
  CHECK(rows == 12);

  const json summary =
      json::parse(read_text_file((dir / "summary.json").string()));
  CHECK(summary.contains("conservation"));
  CHECK(summary.contains("observables"));
  CHECK(summary.contains("timescales"));
  CHECK(summary.at("validation").empty());
  CHECK(summary.at("conservation").at("q2_drift_max").get<double>() == 0.0);

  // A second run into the same directory must refuse to clobber results.
  std::string err;
  CHECK(run_cli("run " + cfg + " --out " + dir.string(), &err) == 1);
  CHECK(err.find("refusing to overwrite existing output") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("identical seeds reproduce artifacts byte for byte") {
  const auto cfg = write_config("trisim_cli_rep.json", small_run_config());
  const auto d1 = fresh_dir("trisim_cli_rep1");
  const auto d2 = fresh_dir("trisim_cli_rep2");
  REQUIRE(run_cli("run " + cfg + " --out " + d1.string()) == 0);
  REQUIRE(run_cli("run " + cfg + " --out " + d2.string()) == 0);
  for (const char* f : {"observables.csv", "events.csv", "snapshot.json"})
    CHECK(read_text_file((d1 / f).string()) ==
          read_text_file((d2 / f).string()));

  // A different seed separates the trajectories.
  const auto d3 = fresh_dir("trisim_cli_rep3");
  REQUIRE(run_cli("run " + cfg + " --seed 43 --out " + d3.string()) == 0);
  CHECK(read_text_file((d1 / "observables.csv").string()) !=
        read_text_file((d3 / "observables.csv").string()));
  fs::remove_all(d1);
  fs::remove_all(d2);
  fs::remove_all(d3);
}

TEST_CASE("a zero-horizon run emits exactly the initial sample") {
  auto j = small_run_config();
  j["run"]["horizon"] = 0.0;
  const auto cfg = write_config("trisim_cli_zero.json", j);
  const auto dir = fresh_dir("trisim_cli_zero_out");
  REQUIRE(run_cli("run " + cfg + " --out " + dir.string()) == 0);
  const std::string obs = read_text_file((dir / "observables.csv").string());
  CHECK(std::count(obs.begin(), obs.end(), '\n') == 2);  // header + t = 0
  const json snap =
      json::parse(read_text_file((dir / "snapshot.json").string()));
  CHECK(snap.at("time").get<double>() == 0.0);
  fs::remove_all(dir);
}

TEST_CASE("sweep fans out per-point directories with a summary") {
  auto j = small_run_config();
  j["run"]["horizon"] = 0.05;
  j["sweep"] = {{"axes", {{"dyn.T_0", {0.5, 2.0}}}}, {"replicates", 2}};
  const auto cfg = write_config("trisim_cli_sweep.json", j);
  const auto dir = fresh_dir("trisim_cli_sweep_out");

  REQUIRE(run_cli("sweep " + cfg + " --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "sweep.csv"));
  const json summary =
      json::parse(read_text_file((dir / "sweep_summary.json").string()));
  CHECK(summary.at("points") == 2);
  CHECK(summary.at("total_runs") == 4);  // 2 values x 2 replicates
  CHECK(summary.at("failures").empty());
  CHECK(summary.at("axes").at("dyn.T_0") == json({0.5, 2.0}));
  for (const char* sub : {"p0_r0", "p0_r1", "p1_r0", "p1_r1"})
    CHECK(fs::exists(dir / sub / "observables.csv"));

  // One aggregated row per (point, replicate) under a stable header.
  const std::string csv = read_text_file((dir / "sweep.csv").string());
  CHECK(csv.rfind("point,replicate,seed,ok,dyn.T_0,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  fs::remove_all(dir);
}

TEST_CASE("oracle reproduces the closed-form triangle partition function") {
  const auto spec = write_config(
      "trisim_cli_oracle.json",
      json{{"n", 3}, {"m", 1}, {"J", 1.0}, {"mode", "gibbs"}, {"T", 1.0}});
  std::string out;
  REQUIRE(run_cli("oracle " + spec, &out) == 0);
  const json res = json::parse(out);
  const double z = 2.0 * std::exp(3.0) + 6.0 * std::exp(-1.0);
  CHECK(res.at("gibbs").at("Z").get<double>() ==
        doctest::Approx(z).epsilon(1e-12));
  CHECK(res.at("model").at("states") == 8);

  // Rate mode exposes the relaxation spectrum.
  const auto spec2 = write_config(
      "trisim_cli_oracle2.json",
      json{{"n", 3}, {"mode", "rates"}, {"rule", "heat_bath"}, {"T", 1.0}});
  REQUIRE(run_cli("oracle " + spec2 + " --out /tmp/trisim_oracle_out.json") ==
          0);
  const json res2 = json::parse(read_text_file("/tmp/trisim_oracle_out.json"));
  CHECK(res2.at("rates").at("reducible") == false);
  CHECK(res2.at("rates").at("slowest_relaxation").get<double>() > 0.0);

  // Unknown keys in the spec are rejected.
  const auto bad = write_config("trisim_cli_oracle3.json",
                                json{{"n", 3}, {"temperature", 1.0}});
  std::string err;
  CHECK(run_cli("oracle " + bad, &err) == 1);
  CHECK(err.find("unknown oracle key") != std::string::npos);
}

TEST_CASE("validate returns 0 for clean snapshots and 2 for drifted ones") {
  const auto cfg = write_config("trisim_cli_val.json", small_run_config());
  const auto dir = fresh_dir("trisim_cli_val_out");
  REQUIRE(run_cli("run " + cfg + " --out " + dir.string()) == 0);
  const std::string snap_path = (dir / "snapshot.json").string();

  std::string out;
  CHECK(run_cli("validate " + snap_path, &out) == 0);  // inferred parameters
  CHECK(json::parse(out).at("valid") == true);
  CHECK(run_cli("validate " + snap_path + " --config " + cfg, &out) == 0);
  CHECK(json::parse(out).at("params_inferred") == false);

  // Push energy into the reservoir: the first invariant breaks.
  json snap = json::parse(read_text_file(snap_path));
  snap["reservoir"] = snap["reservoir"].get<double>() + 1.0;
  const std::string bad_path = "/tmp/trisim_cli_bad_snap.json";
  write_text_file(bad_path, snap.dump());
  CHECK(run_cli("validate " + bad_path, &out) == 2);
  const json rep = json::parse(out);
  CHECK(rep.at("valid") == false);
  CHECK(!rep.at("violations").empty());
  fs::remove_all(dir);
}

TEST_CASE("stability reports on a snapshot produced by a run") {
  auto j = small_run_config();
  j["dyn"] = {{"sigma_T", 0.0}};  // noise-free so the Lyapunov block engages
  const auto cfg = write_config("trisim_cli_stab.json", j);
  const auto dir = fresh_dir("trisim_cli_stab_out");
  REQUIRE(run_cli("run " + cfg + " --out " + dir.string()) == 0);

  std::string out;
  REQUIRE(run_cli("stability " + (dir / "snapshot.json").string() + " " + cfg +
                      " --horizon 0.05",
                  &out) == 0);
  const json rep = json::parse(out);
  CHECK(rep.at("jacobian").at("dimension") == 12);
  CHECK(rep.at("jacobian").at("eigenvalues").size() == 12);
  CHECK(rep.at("memory_bound").contains("kernel_mass"));
  CHECK(rep.at("master_stability").contains("synchronizes"));
  CHECK(rep.at("lyapunov").at("samples").get<int>() > 1);
  fs::remove_all(dir);
}

TEST_CASE("bad invocations fail with a nonzero exit") {
  std::string out;
  CHECK(run_cli("run /tmp/no_such_trisim_cfg.json", &out) == 1);
  CHECK(out.find("error:") != std::string::npos);
  CHECK(run_cli("", &out) != 0);  // a subcommand is required
}
