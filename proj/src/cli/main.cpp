// Command-line front end: run / sweep / oracle / stability / validate.
#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "trisim/config.hpp"
#include "trisim/dynamics.hpp"
#include "trisim/exact.hpp"
#include "trisim/runner.hpp"
#include "trisim/serialize.hpp"
#include "trisim/stability.hpp"

namespace {

using nlohmann::json;
using namespace trisim;

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_text_file(out_path, j.dump(2) + "\n");
}

// ---- oracle ----------------------------------------------------------------

SmallModel model_from_spec(const json& j) {
  SmallModel sm;
  sm.n = j.value("n", 3);
  sm.m = j.value("m", 1);
  sm.J = j.value("J", 1.0);
  sm.h = j.value("h", 0.0);
  sm.gamma = j.value("gamma", 0.0);
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3)
        throw std::invalid_argument("edges entries must be [i, j] or [i, j, w]");
      double w = e.size() == 3 ? e[2].get<double>() : 1.0;
      sm.edges.emplace_back(make_edge(e[0].get<int>(), e[1].get<int>()), w);
    }
  } else if (sm.n == 3) {
    sm = SmallModel::triangle(sm.J, sm.h, sm.gamma);
    sm.m = j.value("m", 1);
  } else {
    throw std::invalid_argument("non-triangle instances need an edges list");
  }
  return sm;
}

json state_labels(const SmallModel& sm, const std::vector<std::uint32_t>& states) {
  json out = json::array();
  for (std::uint32_t s : states) out.push_back(s);
  return out;
}

json gibbs_to_json(const SmallModel& sm, const GibbsResult& g) {
  json j;
  j["Z"] = g.Z;
  j["states"] = state_labels(sm, g.states);
  j["energies"] = g.energy;
  j["p"] = g.p;
  return j;
}

json rates_to_json(const SmallModel& sm, const RateModel& rm) {
  json j;
  j["states"] = state_labels(sm, rm.states);
  j["energies"] = rm.energy;
  j["pi"] = std::vector<double>(rm.pi.data(), rm.pi.data() + rm.pi.size());
  json spec = json::array();
  for (const auto& z : rm.spectrum) spec.push_back({z.real(), z.imag()});
  j["spectrum"] = spec;
  j["relaxation_times"] = rm.relaxation_times;
  j["reducible"] = rm.reducible;
  j["slowest_relaxation"] = rm.slowest_relaxation();
  return j;
}

int cmd_oracle(const std::string& spec_path, const std::string& out_path) {
  json spec = json::parse(read_text_file(spec_path));
  static const std::set<std::string> allowed{"n",    "m",     "J",
                                             "h",    "gamma", "edges",
                                             "mode", "rule",  "T",
                                             "rate", "seed_state"};
  for (const auto& [key, val] : spec.items())
    if (!allowed.count(key))
      throw std::invalid_argument("unknown oracle key \"" + key + "\"");

  SmallModel sm = model_from_spec(spec);
  std::string mode = spec.value("mode", "gibbs");
  json out;
  out["model"] = {{"n", sm.n},         {"m", sm.m}, {"J", sm.J},
                  {"h", sm.h},         {"gamma", sm.gamma},
                  {"states", sm.state_count()}};

  if (mode == "gibbs") {
    double T = spec.value("T", 1.0);
    out["gibbs"] = gibbs_to_json(sm, enumerate_gibbs(sm, T));
    out["T"] = T;
  } else if (mode == "rates") {
    std::string rule_name = spec.value("rule", "heat_bath");
    RateRule rule;
    if (rule_name == "heat_bath")
      rule = RateRule::HeatBath;
    else if (rule_name == "metropolis")
      rule = RateRule::Metropolis;
    else if (rule_name == "kawasaki")
      rule = RateRule::Kawasaki;
    else
      throw std::invalid_argument("unknown rule \"" + rule_name + "\"");
    std::vector<double> T_node;
    if (spec.contains("T") && spec.at("T").is_array())
      T_node = spec.at("T").get<std::vector<double>>();
    else
      T_node.assign(static_cast<std::size_t>(sm.n), spec.value("T", 1.0));
    double rate = spec.value("rate", 1.0);
    std::uint32_t seed_state = spec.value("seed_state", 0u);
    out["rule"] = rule_name;
    out["rates"] = rates_to_json(sm, build_rate_matrix(sm, rule, T_node, rate,
                                                       seed_state));
  } else if (mode == "basins") {
    BasinDecomposition bd = basin_decomposition(sm);
    json jb;
    jb["attractors"] = bd.attractors;
    jb["basin_sizes"] = bd.basin_sizes;
    jb["basin_of"] = bd.basin_of;
    json conn = json::array(), hier = json::array();
    for (Eigen::Index r = 0; r < bd.connectivity.rows(); ++r) {
      json cr = json::array(), hr = json::array();
      for (Eigen::Index cc = 0; cc < bd.connectivity.cols(); ++cc) {
        cr.push_back(bd.connectivity(r, cc));
        hr.push_back(bd.hierarchy(r, cc));
      }
      conn.push_back(cr);
      hier.push_back(hr);
    }
    jb["connectivity"] = conn;
    jb["hierarchy"] = hier;
    out["basins"] = jb;
  } else {
    throw std::invalid_argument("unknown mode \"" + mode +
                                "\" (gibbs | rates | basins)");
  }
  emit(out, out_path);
  return 0;
}

// ---- stability ----------------------------------------------------------

// Exact continuous drift of the stacked (phi, T, M) state: each sub-step is
// Euler with drift evaluated at the old state, so (step(x) - x)/dt recovers it.
std::vector<double> continuous_drift(const Configuration& base,
                                     const ModelParams& mp,
                                     const std::vector<double>& x) {
  const std::size_t n = base.agents.size();
  auto unpack = [&](Configuration& c) {
    for (std::size_t i = 0; i < n; ++i) {
      c.agents[i].phi = x[i];
      c.agents[i].temperature = x[n + i];
      c.agents[i].memory = x[2 * n + i];
    }
  };
  Rng rng(0);  // noise scales are zero; never drawn
  std::vector<double> f(3 * n);

  Configuration cp = base;
  unpack(cp);
  phi_step(cp, mp, rng, mp.dyn.dt);
  Configuration ct = base;
  unpack(ct);
  temperature_step(ct, mp, rng, mp.dyn.dt);
  Configuration cm = base;
  unpack(cm);
  memory_step(cm, mp, mp.dyn.dt);

  for (std::size_t i = 0; i < n; ++i) {
    f[i] = (cp.agents[i].phi - x[i]) / mp.dyn.dt;
    f[n + i] = (ct.agents[i].temperature - x[n + i]) / mp.dyn.dt;
    f[2 * n + i] = (cm.agents[i].memory - x[2 * n + i]) / mp.dyn.dt;
  }
  return f;
}

int cmd_stability(const std::string& snapshot_path,
                  const std::string& config_path, const std::string& out_path,
                  double horizon, double gamma_c) {
  RunConfig rc = load_config(config_path);
  Configuration c0 =
      snapshot_from_json(json::parse(read_text_file(snapshot_path)), rc.model);

  ModelParams quiet = rc.model;
  quiet.dyn.sigma_T = 0;
  quiet.dyn.sigma_phi = 0;
  quiet.dyn.sigma_G = 0;
  quiet.dyn.sigma_D = 0;
  quiet.dyn.sigma_theta = 0;
  quiet.dyn.rate_role = quiet.dyn.rate_exchange = quiet.dyn.rate_birth =
      quiet.dyn.rate_death = quiet.dyn.rate_flip = 0;

  const std::size_t n = c0.agents.size();
  std::vector<double> x0(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    x0[i] = c0.agents[i].phi;
    x0[n + i] = c0.agents[i].temperature;
    x0[2 * n + i] = c0.agents[i].memory;
  }
  Eigen::MatrixXd J = jacobian_fd(
      [&](const std::vector<double>& x) {
        return continuous_drift(c0, quiet, x);
      },
      x0);

  json out;
  Eigen::EigenSolver<Eigen::MatrixXd> es(J);
  json eig = json::array();
  double abscissa = -1e300;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    eig.push_back({es.eigenvalues()(k).real(), es.eigenvalues()(k).imag()});
    abscissa = std::max(abscissa, es.eigenvalues()(k).real());
  }
  out["jacobian"] = {{"state", "phi, T, M stacked per agent"},
                     {"dimension", 3 * n},
                     {"eigenvalues", eig},
                     {"spectral_abscissa", abscissa},
                     {"linearly_stable", abscissa < 0}};

  MemoryBound mb = memory_operator_bound(J, rc.model.kernel, horizon, gamma_c);
  out["memory_bound"] = {{"kernel_mass", mb.kernel_mass},
                         {"j_norm", mb.j_norm},
                         {"bound", mb.bound},
                         {"gamma_c", gamma_c},
                         {"bound_ok", mb.bound_ok},
                         {"s_norm", mb.s_norm},
                         {"contracting", mb.contracting}};

  // Master stability over the 2-section Laplacian eigenvalue range, C = I.
  {
    int na = c0.hyper.n_agents();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(na, na);
    for (const Edge& e : c0.hyper.edges()) {
      double w = c0.hyper.weight(e.first, e.second);
      L(e.first, e.first) += w;
      L(e.second, e.second) += w;
      L(e.first, e.second) -= w;
      L(e.second, e.first) -= w;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> les(L);
    double lmax = les.eigenvalues().maxCoeff();
    std::vector<double> alphas;
    for (int k = 0; k <= 20; ++k)
      alphas.push_back(lmax * static_cast<double>(k) / 10.0);
    MasterStability ms = master_stability(
        J, Eigen::MatrixXd::Identity(J.rows(), J.cols()), alphas);
    out["master_stability"] = {{"alpha", ms.alpha},
                               {"lambda", ms.lambda},
                               {"synchronizes", ms.synchronizes}};
  }

  // Lyapunov descent along the zero-noise flow from the snapshot.
  {
    std::vector<Configuration> traj;
    simulate(c0, quiet, horizon, 0,
             nullptr, [&traj](const Configuration& s) { traj.push_back(s); },
             1);
    std::vector<LyapunovPoint> lyap =
        lyapunov_check(traj, quiet, quiet.dyn.dt);
    double max_dv = -1e300, v0 = lyap.empty() ? 0 : lyap.front().V,
           v1 = lyap.empty() ? 0 : lyap.back().V;
    for (const auto& p : lyap) max_dv = std::max(max_dv, p.dVdt);
    out["lyapunov"] = {{"samples", lyap.size()},
                       {"V_initial", v0},
                       {"V_final", v1},
                       {"max_dVdt", max_dv},
                       {"descending", max_dv <= 1e-8}};
  }

  emit(out, out_path);
  return 0;
}

// ---- validate -------------------------------------------------------------

ModelParams infer_params(const json& snap) {
  ModelParams mp;
  mp.n_agents = snap.at("hypergraph").at("n_agents").get<int>();
  const auto& agents = snap.at("agents");
  if (agents.empty()) throw std::invalid_argument("snapshot has no agents");
  mp.m = static_cast<int>(agents[0].at("opinion").size());
  mp.n_theta = static_cast<int>(agents[0].at("knowledge").size());
  std::size_t comps = snap.at("global_filt").size();
  mp.kernel.a.assign(comps, 1.0 / static_cast<double>(comps));
  mp.kernel.tau.clear();
  for (std::size_t k = 0; k < comps; ++k)
    mp.kernel.tau.push_back(static_cast<double>(k + 1));
  const auto& blocks = snap.at("blocks");
  if (!blocks.empty()) {
    const auto g1 = blocks[0].at("G1").get<std::vector<double>>();
    const auto d = blocks[0].at("D").get<std::vector<double>>();
    mp.p = static_cast<int>(g1.size());
    double cg = 0, cd = 0;
    for (double v : g1) cg += v * v;
    for (double v : d) cd += v * v;
    mp.c_G = cg;
    mp.c_D = cd < 1e-12 ? 0.0 : cd;
  }
  return mp;
}

int cmd_validate(const std::string& snapshot_path,
                 const std::string& config_path, const std::string& out_path) {
  json snap = json::parse(read_text_file(snapshot_path));
  ModelParams mp;
  if (!config_path.empty())
    mp = load_config(config_path).model;
  else
    mp = infer_params(snap);
  Configuration c = snapshot_from_json(snap, mp);
  std::vector<std::string> violations = validate(c, mp);
  json out;
  out["snapshot"] = snapshot_path;
  out["params_inferred"] = config_path.empty();
  out["violations"] = violations;
  out["valid"] = violations.empty();
  emit(out, out_path);
  return violations.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"triadic hypergraph simulation engine"};
  app.require_subcommand(1);

  std::string config_path, out_path, snapshot_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int stride = 0, workers = 0;
  double horizon_flag = 1.0, gamma_c = 1.0;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
  };

  CLI::App* run = app.add_subcommand("run", "execute one seeded run");
  run->add_option("config", config_path, "config JSON path")->required();
  add_seed(run);
  run->add_option("--out", out_path, "output directory");
  run->add_option("--stride", stride, "observer stride override");

  CLI::App* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep");
  sweep->add_option("config", config_path, "config JSON path")->required();
  add_seed(sweep);
  sweep->add_option("--out", out_path, "output directory");
  sweep->add_option("--workers", workers, "concurrent sweep points");

  CLI::App* oracle =
      app.add_subcommand("oracle", "exact enumeration on a small instance");
  oracle->add_option("spec", snapshot_path, "instance spec JSON path")
      ->required();
  oracle->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* stability =
      app.add_subcommand("stability", "stability report for a snapshot");
  stability->add_option("snapshot", snapshot_path, "snapshot JSON path")
      ->required();
  stability->add_option("config", config_path, "config JSON path")->required();
  stability->add_option("--out", out_path, "output file (default stdout)");
  stability->add_option("--horizon", horizon_flag,
                        "Lyapunov / memory-bound horizon");
  stability->add_option("--gamma-c", gamma_c, "memory-bound threshold");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check snapshot invariants");
  validate_cmd->add_option("snapshot", snapshot_path, "snapshot JSON path")
      ->required();
  validate_cmd->add_option("--config", config_path,
                           "config JSON (otherwise parameters are inferred)");
  validate_cmd->add_option("--out", out_path, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      RunConfig rc = load_config(config_path);
      if (seed_set) rc.seed = seed;
      if (stride > 0) rc.stride = stride;
      std::string dir = !out_path.empty()
                            ? out_path
                            : (!rc.out_dir.empty()
                                   ? rc.out_dir
                                   : "run_" + std::to_string(rc.seed));
      RunResult res = run_simulation(rc, dir);
      std::cout << res.dir << "\n";
      return 0;
    }
    if (sweep->parsed()) {
      RunConfig rc = load_config(config_path);
      if (seed_set) rc.seed = seed;
      if (workers > 0) rc.workers = workers;
      std::string dir = !out_path.empty()
                            ? out_path
                            : (!rc.out_dir.empty()
                                   ? rc.out_dir
                                   : "sweep_" + std::to_string(rc.seed));
      nlohmann::json summary = sweep_simulation(rc, dir);
      std::cout << dir << "\n";
      return summary.at("failures").empty() ? 0 : 1;
    }
    if (oracle->parsed()) return cmd_oracle(snapshot_path, out_path);
    if (stability->parsed())
      return cmd_stability(snapshot_path, config_path, out_path, horizon_flag,
                           gamma_c);
    if (validate_cmd->parsed())
      return cmd_validate(snapshot_path, config_path, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
