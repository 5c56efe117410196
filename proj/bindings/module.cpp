// Python bindings for the main operations: parameter handling, configuration
// construction, simulation, order parameters, invariant validation, and the
// exact-enumeration oracle.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "trisim/agent.hpp"
#include "trisim/config.hpp"
#include "trisim/dynamics.hpp"
#include "trisim/exact.hpp"
#include "trisim/knowledge.hpp"
#include "trisim/observables.hpp"
#include "trisim/serialize.hpp"

namespace py = pybind11;
using namespace trisim;
using nlohmann::json;

namespace {

ModelParams params_from_json_str(const std::string& text) {
  json j = json::parse(text);
  // Accept either a full run config or just its model-side tables.
  json cfg = json::object();
  for (const char* table : {"model", "kernel", "energy", "dyn", "init"})
    if (j.contains(table)) cfg[table] = j.at(table);
  return config_from_json(cfg).model;
}

std::string params_to_json_str(const ModelParams& mp) {
  RunConfig rc;
  rc.model = mp;
  json j = config_to_json(rc);
  j.erase("run");
  j.erase("sweep");
  return j.dump(2);
}

py::dict order_parameters_dict(const Configuration& c) {
  OrderParameters op = order_parameters(c);
  py::dict d;
  d["psi_form"] = op.psi_form;
  d["phi_align"] = op.phi_align;
  d["coherence"] = op.coherence;
  d["psi_mem"] = op.psi_mem;
  d["phi_role"] = op.phi_role;
  d["phi_sync"] = op.phi_sync;
  return d;
}

py::dict run_series(const Configuration& start, const ModelParams& mp,
                    double horizon, std::uint64_t seed, int stride) {
  std::vector<double> times;
  std::vector<std::vector<double>> cols(6);
  auto observer = [&](const Configuration& s) {
    times.push_back(s.time);
    OrderParameters op = order_parameters(s);
    double vals[6] = {op.psi_form, op.phi_align, op.coherence,
                      op.psi_mem,  op.phi_role,  op.phi_sync};
    for (int k = 0; k < 6; ++k) cols[static_cast<std::size_t>(k)].push_back(vals[k]);
  };
  simulate(start, mp, horizon, seed, nullptr, observer, stride);
  py::dict d;
  d["time"] = times;
  const char* names[6] = {"psi_form", "phi_align", "coherence",
                          "psi_mem",  "phi_role",  "phi_sync"};
  for (int k = 0; k < 6; ++k) d[names[k]] = cols[static_cast<std::size_t>(k)];
  return d;
}

py::dict oracle_gibbs(int n, int m, double J, double h, double gamma, double T,
                      const std::optional<std::vector<std::tuple<int, int, double>>>&
                          edges) {
  SmallModel sm;
  if (edges) {
    sm.n = n;
    sm.m = m;
    sm.J = J;
    sm.h = h;
    sm.gamma = gamma;
    for (const auto& [i, j, w] : *edges)
      sm.edges.emplace_back(make_edge(i, j), w);
  } else {
    if (n != 3) throw std::invalid_argument("edges required unless n == 3");
    sm = SmallModel::triangle(J, h, gamma);
    sm.m = m;
  }
  GibbsResult g = enumerate_gibbs(sm, T);
  py::dict d;
  d["Z"] = g.Z;
  d["states"] = g.states;
  d["energies"] = g.energy;
  d["p"] = g.p;
  return d;
}

}  // namespace

PYBIND11_MODULE(_trisim, mod) {
  mod.doc() =
      "Stochastic multi-agent dynamics on a dynamic triadic hypergraph: "
      "simulation engine core";

  py::class_<ModelParams>(mod, "ModelParams")
      .def(py::init<>())
      .def_readwrite("n_agents", &ModelParams::n_agents)
      .def_readwrite("m", &ModelParams::m)
      .def_readwrite("p", &ModelParams::p)
      .def_readwrite("n_theta", &ModelParams::n_theta)
      .def_readwrite("c_G", &ModelParams::c_G)
      .def_readwrite("c_D", &ModelParams::c_D)
      .def("validate", &ModelParams::validate)
      .def("to_json", &params_to_json_str)
      .def_static("from_json", &params_from_json_str);

  py::class_<Configuration>(mod, "Configuration")
      .def_property_readonly("n", &Configuration::n)
      .def_property_readonly("m", &Configuration::m)
      .def_readonly("time", &Configuration::time)
      .def_readonly("reservoir", &Configuration::reservoir)
      .def("q1", [](const Configuration& c) { return c.q1(); })
      .def("q2", &Configuration::q2)
      .def("q3", &Configuration::q3)
      .def("triads",
           [](const Configuration& c) {
             std::vector<std::tuple<int, int, int>> out;
             for (const Triad& t : c.hyper.triads())
               out.emplace_back(t[0], t[1], t[2]);
             return out;
           })
      .def("to_json",
           [](const Configuration& c) { return snapshot_to_json(c).dump(2); })
      .def_static("from_json",
                  [](const std::string& text, const ModelParams& mp) {
                    return snapshot_from_json(json::parse(text), mp);
                  });

  mod.def("init_configuration", &init_configuration, py::arg("params"),
          py::arg("seed"));
  mod.def(
      "simulate",
      [](const Configuration& c, const ModelParams& mp, double horizon,
         std::uint64_t seed) { return simulate(c, mp, horizon, seed); },
      py::arg("config"), py::arg("params"), py::arg("horizon"),
      py::arg("seed"));
  mod.def("run_series", &run_series, py::arg("config"), py::arg("params"),
          py::arg("horizon"), py::arg("seed"), py::arg("stride") = 1,
          "Simulate and sample the six order parameters on a fixed stride");
  mod.def("order_parameters", &order_parameters_dict, py::arg("config"));
  mod.def(
      "validate",
      [](const Configuration& c, const ModelParams& mp) {
        return validate(c, mp);
      },
      py::arg("config"), py::arg("params"),
      "Invariant violations (empty list = valid)");
  mod.def(
      "wasserstein2_sq",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        KnowledgeState ka{a}, kb{b};
        return wasserstein2_sq(ka, kb);
      },
      py::arg("p"), py::arg("q"),
      "Exact squared W2 between same-grid distributions");
  mod.def("oracle_gibbs", &oracle_gibbs, py::arg("n"), py::arg("m"),
          py::arg("J"), py::arg("h"), py::arg("gamma"), py::arg("T"),
          py::arg("edges") = py::none(),
          "Exact partition function and Boltzmann probabilities");
}
