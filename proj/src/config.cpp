#include "trisim/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

namespace trisim {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& table,
                    const std::set<std::string>& allowed) {
  if (!j.is_object())
    throw std::invalid_argument("table \"" + table + "\" must be an object");
  for (const auto& [key, val] : j.items())
    if (!allowed.count(key))
      throw std::invalid_argument("unknown key \"" + table + "." + key + "\"");
}

double read_double(const json& j, const std::string& table,
                   const std::string& key, double def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number())
    throw std::invalid_argument("\"" + table + "." + key + "\" must be a number");
  return j.at(key).get<double>();
}

int read_int(const json& j, const std::string& table, const std::string& key,
             int def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number_integer())
    throw std::invalid_argument("\"" + table + "." + key +
                                "\" must be an integer");
  return j.at(key).get<int>();
}

bool read_bool(const json& j, const std::string& table, const std::string& key,
               bool def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_boolean())
    throw std::invalid_argument("\"" + table + "." + key +
                                "\" must be a boolean");
  return j.at(key).get<bool>();
}

std::vector<double> read_vector(const json& j, const std::string& table,
                                const std::string& key,
                                std::vector<double> def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_array())
    throw std::invalid_argument("\"" + table + "." + key +
                                "\" must be an array of numbers");
  return j.at(key).get<std::vector<double>>();
}

// Scalar parameters addressable as sweep axes, keyed by dotted name.
std::map<std::string, double*> scalar_axes(ModelParams& mp) {
  EnergyParams& e = mp.energy;
  DynParams& d = mp.dyn;
  InitParams& in = mp.init;
  return {
      {"model.c_G", &mp.c_G},
      {"model.c_D", &mp.c_D},
      {"energy.J", &e.J},
      {"energy.kappa_edge", &e.kappa_edge},
      {"energy.lambda_tri", &e.lambda_tri},
      {"energy.kappaM_stiff", &e.kappaM_stiff},
      {"energy.gamma_tau", &e.gamma_tau},
      {"energy.alpha_role", &e.alpha_role},
      {"energy.beta_role", &e.beta_role},
      {"energy.gamma_role", &e.gamma_role},
      {"energy.lambda_role", &e.lambda_role},
      {"energy.a_site", &e.a_site},
      {"energy.g_tri", &e.g_tri},
      {"energy.h_pair", &e.h_pair},
      {"energy.kappa_curv", &e.kappa_curv},
      {"energy.lambda_curv", &e.lambda_curv},
      {"energy.gamma_hist", &e.gamma_hist},
      {"energy.alpha_mem", &e.alpha_mem},
      {"energy.beta_mem", &e.beta_mem},
      {"energy.gammaM_mem", &e.gammaM_mem},
      {"energy.beta_val", &e.beta_val},
      {"energy.lambda_mem", &e.lambda_mem},
      {"energy.J_form", &e.J_form},
      {"energy.gamma_mem", &e.gamma_mem},
      {"dyn.dt", &d.dt},
      {"dyn.kappa_T", &d.kappa_T},
      {"dyn.gamma_relax", &d.gamma_relax},
      {"dyn.T_0", &d.T_0},
      {"dyn.eta_0", &d.eta_0},
      {"dyn.E_a", &d.E_a},
      {"dyn.alpha_memT", &d.alpha_memT},
      {"dyn.sigma_T", &d.sigma_T},
      {"dyn.T_min", &d.T_min},
      {"dyn.T_max", &d.T_max},
      {"dyn.d_phi", &d.d_phi},
      {"dyn.sigma_phi", &d.sigma_phi},
      {"dyn.sigma_G", &d.sigma_G},
      {"dyn.sigma_D", &d.sigma_D},
      {"dyn.eta_gan", &d.eta_gan},
      {"dyn.K_theta", &d.K_theta},
      {"dyn.omega_0", &d.omega_0},
      {"dyn.sigma_theta", &d.sigma_theta},
      {"dyn.kappa_M", &d.kappa_M},
      {"dyn.rate_role", &d.rate_role},
      {"dyn.rate_exchange", &d.rate_exchange},
      {"dyn.rate_birth", &d.rate_birth},
      {"dyn.rate_death", &d.rate_death},
      {"dyn.rate_flip", &d.rate_flip},
      {"dyn.kappa_K", &d.kappa_K},
      {"init.phi_0", &in.phi_0},
      {"init.phi_jitter", &in.phi_jitter},
      {"init.theta_mode", &in.theta_mode},
      {"init.M_0", &in.M_0},
      {"init.M_jitter", &in.M_jitter},
      {"init.reservoir", &in.reservoir},
  };
}

}  // namespace

void apply_axis(ModelParams& mp, const std::string& name, double value) {
  auto axes = scalar_axes(mp);
  auto it = axes.find(name);
  if (it != axes.end()) {
    *it->second = value;
    return;
  }
  auto as_int = [&value] { return static_cast<int>(std::llround(value)); };
  if (name == "model.n_agents")
    mp.n_agents = as_int();
  else if (name == "model.m")
    mp.m = as_int();
  else if (name == "model.p")
    mp.p = as_int();
  else if (name == "model.n_theta")
    mp.n_theta = as_int();
  else if (name == "init.birth_headroom")
    mp.init.birth_headroom = as_int();
  else
    throw std::invalid_argument("unknown sweep axis: " + name);
}

RunConfig config_from_json(const json& j) {
  reject_unknown(j, "<top>",
                 {"model", "kernel", "energy", "dyn", "init", "run", "sweep"});
  RunConfig rc;
  ModelParams& mp = rc.model;

  if (j.contains("model")) {
    const json& t = j.at("model");
    reject_unknown(t, "model", {"n_agents", "m", "p", "n_theta", "c_G", "c_D"});
    mp.n_agents = read_int(t, "model", "n_agents", mp.n_agents);
    mp.m = read_int(t, "model", "m", mp.m);
    mp.p = read_int(t, "model", "p", mp.p);
    mp.n_theta = read_int(t, "model", "n_theta", mp.n_theta);
    mp.c_G = read_double(t, "model", "c_G", mp.c_G);
    mp.c_D = read_double(t, "model", "c_D", mp.c_D);
  }
  if (j.contains("kernel")) {
    const json& t = j.at("kernel");
    reject_unknown(t, "kernel", {"a", "tau"});
    mp.kernel.a = read_vector(t, "kernel", "a", mp.kernel.a);
    mp.kernel.tau = read_vector(t, "kernel", "tau", mp.kernel.tau);
  }
  if (j.contains("energy")) {
    const json& t = j.at("energy");
    reject_unknown(
        t, "energy",
        {"J",          "h",           "kappa_edge", "lambda_tri",
         "kappaM_stiff", "gamma_tau", "alpha_role", "beta_role",
         "gamma_role", "lambda_role", "a_site",     "g_tri",
         "h_pair",     "kappa_curv",  "lambda_curv", "gamma_hist",
         "alpha_mem",  "beta_mem",    "gammaM_mem", "beta_val",
         "lambda_mem", "J_form",      "gamma_mem",  "role_compat"});
    EnergyParams& e = mp.energy;
    e.J = read_double(t, "energy", "J", e.J);
    e.h = read_vector(t, "energy", "h", e.h);
    e.kappa_edge = read_double(t, "energy", "kappa_edge", e.kappa_edge);
    e.lambda_tri = read_double(t, "energy", "lambda_tri", e.lambda_tri);
    e.kappaM_stiff = read_double(t, "energy", "kappaM_stiff", e.kappaM_stiff);
    e.gamma_tau = read_double(t, "energy", "gamma_tau", e.gamma_tau);
    e.alpha_role = read_double(t, "energy", "alpha_role", e.alpha_role);
    e.beta_role = read_double(t, "energy", "beta_role", e.beta_role);
    e.gamma_role = read_double(t, "energy", "gamma_role", e.gamma_role);
    e.lambda_role = read_double(t, "energy", "lambda_role", e.lambda_role);
    e.a_site = read_double(t, "energy", "a_site", e.a_site);
    e.g_tri = read_double(t, "energy", "g_tri", e.g_tri);
    e.h_pair = read_double(t, "energy", "h_pair", e.h_pair);
    e.kappa_curv = read_double(t, "energy", "kappa_curv", e.kappa_curv);
    e.lambda_curv = read_double(t, "energy", "lambda_curv", e.lambda_curv);
    e.gamma_hist = read_double(t, "energy", "gamma_hist", e.gamma_hist);
    e.alpha_mem = read_double(t, "energy", "alpha_mem", e.alpha_mem);
    e.beta_mem = read_double(t, "energy", "beta_mem", e.beta_mem);
    e.gammaM_mem = read_double(t, "energy", "gammaM_mem", e.gammaM_mem);
    e.beta_val = read_double(t, "energy", "beta_val", e.beta_val);
    e.lambda_mem = read_double(t, "energy", "lambda_mem", e.lambda_mem);
    e.J_form = read_double(t, "energy", "J_form", e.J_form);
    e.gamma_mem = read_double(t, "energy", "gamma_mem", e.gamma_mem);
    e.role_compat = read_vector(t, "energy", "role_compat", e.role_compat);
  }
  if (j.contains("dyn")) {
    const json& t = j.at("dyn");
    reject_unknown(
        t, "dyn",
        {"dt",        "kappa_T",     "gamma_relax",   "T_0",
         "eta_0",     "E_a",         "alpha_memT",    "sigma_T",
         "T_min",     "T_max",       "d_phi",         "sigma_phi",
         "sigma_G",   "sigma_D",     "eta_gan",       "K_theta",
         "omega_0",   "sigma_theta", "kappa_M",       "rate_role",
         "rate_exchange", "rate_birth", "rate_death", "rate_flip",
         "kappa_K"});
    DynParams& d = mp.dyn;
    d.dt = read_double(t, "dyn", "dt", d.dt);
    d.kappa_T = read_double(t, "dyn", "kappa_T", d.kappa_T);
    d.gamma_relax = read_double(t, "dyn", "gamma_relax", d.gamma_relax);
    d.T_0 = read_double(t, "dyn", "T_0", d.T_0);
    d.eta_0 = read_double(t, "dyn", "eta_0", d.eta_0);
    d.E_a = read_double(t, "dyn", "E_a", d.E_a);
    d.alpha_memT = read_double(t, "dyn", "alpha_memT", d.alpha_memT);
    d.sigma_T = read_double(t, "dyn", "sigma_T", d.sigma_T);
    d.T_min = read_double(t, "dyn", "T_min", d.T_min);
    d.T_max = read_double(t, "dyn", "T_max", d.T_max);
    d.d_phi = read_double(t, "dyn", "d_phi", d.d_phi);
    d.sigma_phi = read_double(t, "dyn", "sigma_phi", d.sigma_phi);
    d.sigma_G = read_double(t, "dyn", "sigma_G", d.sigma_G);
    d.sigma_D = read_double(t, "dyn", "sigma_D", d.sigma_D);
    d.eta_gan = read_double(t, "dyn", "eta_gan", d.eta_gan);
    d.K_theta = read_double(t, "dyn", "K_theta", d.K_theta);
    d.omega_0 = read_double(t, "dyn", "omega_0", d.omega_0);
    d.sigma_theta = read_double(t, "dyn", "sigma_theta", d.sigma_theta);
    d.kappa_M = read_double(t, "dyn", "kappa_M", d.kappa_M);
    d.rate_role = read_double(t, "dyn", "rate_role", d.rate_role);
    d.rate_exchange = read_double(t, "dyn", "rate_exchange", d.rate_exchange);
    d.rate_birth = read_double(t, "dyn", "rate_birth", d.rate_birth);
    d.rate_death = read_double(t, "dyn", "rate_death", d.rate_death);
    d.rate_flip = read_double(t, "dyn", "rate_flip", d.rate_flip);
    d.kappa_K = read_double(t, "dyn", "kappa_K", d.kappa_K);
  }
  if (j.contains("init")) {
    const json& t = j.at("init");
    reject_unknown(t, "init",
                   {"phi_0", "phi_jitter", "theta_mode", "M_0", "M_jitter",
                    "reservoir", "birth_headroom", "triads", "ring"});
    InitParams& in = mp.init;
    in.phi_0 = read_double(t, "init", "phi_0", in.phi_0);
    in.phi_jitter = read_double(t, "init", "phi_jitter", in.phi_jitter);
    in.theta_mode = read_double(t, "init", "theta_mode", in.theta_mode);
    in.M_0 = read_double(t, "init", "M_0", in.M_0);
    in.M_jitter = read_double(t, "init", "M_jitter", in.M_jitter);
    in.reservoir = read_double(t, "init", "reservoir", in.reservoir);
    in.birth_headroom = read_int(t, "init", "birth_headroom", in.birth_headroom);
    in.ring = read_bool(t, "init", "ring", in.ring);
    if (t.contains("triads")) {
      if (!t.at("triads").is_array())
        throw std::invalid_argument("\"init.triads\" must be an array");
      in.triads.clear();
      for (const auto& tt : t.at("triads")) {
        if (!tt.is_array() || tt.size() != 3)
          throw std::invalid_argument(
              "\"init.triads\" entries must be 3-element arrays");
        in.triads.push_back(
            {tt[0].get<int>(), tt[1].get<int>(), tt[2].get<int>()});
      }
    }
  }
  if (j.contains("run")) {
    const json& t = j.at("run");
    reject_unknown(t, "run", {"horizon", "stride", "seed", "out", "workers"});
    rc.horizon = read_double(t, "run", "horizon", rc.horizon);
    rc.stride = read_int(t, "run", "stride", rc.stride);
    if (t.contains("seed")) {
      if (!t.at("seed").is_number_integer())
        throw std::invalid_argument("\"run.seed\" must be an integer");
      rc.seed = t.at("seed").get<std::uint64_t>();
    }
    if (t.contains("out")) {
      if (!t.at("out").is_string())
        throw std::invalid_argument("\"run.out\" must be a string");
      rc.out_dir = t.at("out").get<std::string>();
    }
    rc.workers = read_int(t, "run", "workers", rc.workers);
  }
  if (j.contains("sweep")) {
    const json& t = j.at("sweep");
    reject_unknown(t, "sweep", {"axes", "replicates"});
    rc.replicates = read_int(t, "sweep", "replicates", rc.replicates);
    if (t.contains("axes")) {
      if (!t.at("axes").is_object())
        throw std::invalid_argument("\"sweep.axes\" must be an object");
      for (const auto& [name, vals] : t.at("axes").items()) {
        if (!vals.is_array() || vals.empty())
          throw std::invalid_argument("sweep axis \"" + name +
                                      "\" must be a nonempty array");
        ModelParams scratch = mp;  // validates the axis name
        apply_axis(scratch, name, vals[0].get<double>());
        rc.sweep_axes.emplace_back(name, vals.get<std::vector<double>>());
      }
    }
  }

  if (rc.horizon < 0)
    throw std::invalid_argument("\"run.horizon\" must be >= 0");
  if (rc.stride < 1) throw std::invalid_argument("\"run.stride\" must be >= 1");
  if (rc.workers < 1)
    throw std::invalid_argument("\"run.workers\" must be >= 1");
  if (rc.replicates < 1)
    throw std::invalid_argument("\"sweep.replicates\" must be >= 1");
  mp.validate();
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

nlohmann::json config_to_json(const RunConfig& rc) {
  const ModelParams& mp = rc.model;
  const EnergyParams& e = mp.energy;
  const DynParams& d = mp.dyn;
  const InitParams& in = mp.init;
  json j;
  j["model"] = {{"n_agents", mp.n_agents}, {"m", mp.m},       {"p", mp.p},
                {"n_theta", mp.n_theta},   {"c_G", mp.c_G},   {"c_D", mp.c_D}};
  j["kernel"] = {{"a", mp.kernel.a}, {"tau", mp.kernel.tau}};
  j["energy"] = {{"J", e.J},
                 {"h", mp.field()},
                 {"kappa_edge", e.kappa_edge},
                 {"lambda_tri", e.lambda_tri},
                 {"kappaM_stiff", e.kappaM_stiff},
                 {"gamma_tau", e.gamma_tau},
                 {"alpha_role", e.alpha_role},
                 {"beta_role", e.beta_role},
                 {"gamma_role", e.gamma_role},
                 {"lambda_role", e.lambda_role},
                 {"a_site", e.a_site},
                 {"g_tri", e.g_tri},
                 {"h_pair", e.h_pair},
                 {"kappa_curv", e.kappa_curv},
                 {"lambda_curv", e.lambda_curv},
                 {"gamma_hist", e.gamma_hist},
                 {"alpha_mem", e.alpha_mem},
                 {"beta_mem", e.beta_mem},
                 {"gammaM_mem", e.gammaM_mem},
                 {"beta_val", e.beta_val},
                 {"lambda_mem", e.lambda_mem},
                 {"J_form", e.J_form},
                 {"gamma_mem", e.gamma_mem},
                 {"role_compat", e.role_compat}};
  j["dyn"] = {{"dt", d.dt},
              {"kappa_T", d.kappa_T},
              {"gamma_relax", d.gamma_relax},
              {"T_0", d.T_0},
              {"eta_0", d.eta_0},
              {"E_a", d.E_a},
              {"alpha_memT", d.alpha_memT},
              {"sigma_T", d.sigma_T},
              {"T_min", d.T_min},
              {"T_max", d.T_max},
              {"d_phi", d.d_phi},
              {"sigma_phi", d.sigma_phi},
              {"sigma_G", d.sigma_G},
              {"sigma_D", d.sigma_D},
              {"eta_gan", d.eta_gan},
              {"K_theta", d.K_theta},
              {"omega_0", d.omega_0},
              {"sigma_theta", d.sigma_theta},
              {"kappa_M", d.kappa_M},
              {"rate_role", d.rate_role},
              {"rate_exchange", d.rate_exchange},
              {"rate_birth", d.rate_birth},
              {"rate_death", d.rate_death},
              {"rate_flip", d.rate_flip},
              {"kappa_K", d.kappa_K}};
  json jt = json::array();
  for (const auto& t : in.triads) jt.push_back({t[0], t[1], t[2]});
  j["init"] = {{"phi_0", in.phi_0},
               {"phi_jitter", in.phi_jitter},
               {"theta_mode", in.theta_mode},
               {"M_0", in.M_0},
               {"M_jitter", in.M_jitter},
               {"reservoir", in.reservoir},
               {"birth_headroom", in.birth_headroom},
               {"triads", jt},
               {"ring", in.ring}};
  j["run"] = {{"horizon", rc.horizon},
              {"stride", rc.stride},
              {"seed", rc.seed},
              {"out", rc.out_dir},
              {"workers", rc.workers}};
  json axes = json::object();
  for (const auto& [name, vals] : rc.sweep_axes) axes[name] = vals;
  j["sweep"] = {{"axes", axes}, {"replicates", rc.replicates}};
  return j;
}

}  // namespace trisim
