#include "trisim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "trisim/dynamics.hpp"
#include "trisim/observables.hpp"
#include "trisim/serialize.hpp"

namespace trisim {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

struct WindowStats {
  double mean = 0, var = 0, ci_lo = 0, ci_hi = 0;
  std::size_t count = 0;
};

// Statistics over the stationary window: the second half of the samples.
WindowStats window_stats(const std::vector<double>& v) {
  WindowStats w;
  std::size_t start = v.size() / 2;
  w.count = v.size() - start;
  if (w.count == 0) return w;
  for (std::size_t k = start; k < v.size(); ++k) w.mean += v[k];
  w.mean /= static_cast<double>(w.count);
  for (std::size_t k = start; k < v.size(); ++k)
    w.var += (v[k] - w.mean) * (v[k] - w.mean);
  w.var /= static_cast<double>(w.count);
  double se = std::sqrt(w.var / static_cast<double>(w.count));
  w.ci_lo = w.mean - kZ99 * se;
  w.ci_hi = w.mean + kZ99 * se;
  return w;
}

json stats_json(const WindowStats& w) {
  return {{"mean", w.mean},
          {"variance", w.var},
          {"ci99", {w.ci_lo, w.ci_hi}},
          {"samples", w.count}};
}

// Second-smallest eigenvalue of the weighted 2-section Laplacian.
double lambda2(const TriadicHypergraph& h) {
  int n = h.n_agents();
  if (n < 2) return 0;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : h.edges()) {
    double w = h.weight(e.first, e.second);
    L(e.first, e.first) += w;
    L(e.second, e.second) += w;
    L(e.first, e.second) -= w;
    L(e.second, e.first) -= w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  return es.eigenvalues()(1);
}

json timescale_report(const RunConfig& rc, const Configuration& final_config,
                      const std::vector<double>& times,
                      const std::vector<double>& phi_align,
                      const std::vector<double>& coherence) {
  const ModelParams& mp = rc.model;
  json ts;
  std::vector<std::string> warnings;

  double tau_group =
      mp.energy.J != 0 ? 1.0 / std::abs(mp.energy.J) : std::nan("");
  double tau_mem = mp.kernel.max_tau();
  double l2 = lambda2(final_config.hyper);
  double tau_slow = (mp.dyn.kappa_T > 0 && l2 > 1e-12)
                        ? 1.0 / (mp.dyn.kappa_T * l2)
                        : std::nan("");

  double tau_form = std::nan("");
  if (times.size() >= 4) {
    try {
      JmixEstimate est = jmix_estimate(times, phi_align, coherence);
      double nrm = est.J.norm();
      if (nrm > 1e-12) tau_form = 1.0 / nrm;
    } catch (const std::exception&) {
      // degenerate window; leave unset
    }
  }

  auto put = [&ts](const char* key, double v) {
    if (std::isnan(v))
      ts[key] = nullptr;
    else
      ts[key] = v;
  };
  put("tau_group", tau_group);
  put("tau_form", tau_form);
  put("tau_mem", tau_mem);
  put("tau_slow", tau_slow);

  auto check = [&warnings](const char* name, double fast, double slow) {
    if (std::isnan(fast) || std::isnan(slow) || slow == 0) return 0.0;
    double eps = fast / slow;
    if (eps >= 1.0) {
      std::ostringstream os;
      os << name << " = " << eps
         << " >= 1: timescale hierarchy violated (fast mode not separated)";
      warnings.push_back(os.str());
    }
    return eps;
  };
  double e1 = check("epsilon_1 (tau_group/tau_form)", tau_group, tau_form);
  double e2 = check("epsilon_2 (tau_form/tau_mem)", tau_form, tau_mem);
  double e3 = check("epsilon_3 (tau_mem/tau_slow)", tau_mem, tau_slow);
  ts["epsilon_1"] = e1;
  ts["epsilon_2"] = e2;
  ts["epsilon_3"] = e3;
  ts["warnings"] = warnings;
  return ts;
}

void prepare_dir(const std::string& out_dir, const char* guard_file) {
  fs::create_directories(out_dir);
  fs::path guard = fs::path(out_dir) / guard_file;
  if (fs::exists(guard))
    throw std::runtime_error("refusing to overwrite existing output: " +
                             guard.string());
}

}  // namespace

RunResult run_simulation(const RunConfig& rc, const std::string& out_dir) {
  rc.model.validate();
  prepare_dir(out_dir, "observables.csv");
  const fs::path dir(out_dir);

  write_text_file((dir / "config.json").string(), config_to_json(rc).dump(2) + "\n");

  RunResult res;
  res.dir = out_dir;
  try {
    Configuration c = init_configuration(rc.model, rc.seed);
    RoleReference ref = role_snapshot(c);

    const char* names[] = {"psi_form", "phi_align", "coherence", "psi_mem",
                           "phi_role", "phi_sync",  "mean_T",    "q1",
                           "q2_drift", "q3"};
    for (const char* n : names) res.series.emplace_back(n, std::vector<double>{});

    bool strict_q1 = rc.model.c_D > 0;
    auto observe = [&](const Configuration& s) {
      res.times.push_back(s.time);
      OrderParameters op = order_parameters(s, &ref);
      double tbar = 0;
      for (const auto& a : s.agents) tbar += a.temperature;
      tbar /= s.n();
      std::vector<long> q2 = s.q2();
      long q2d = 0;
      for (std::size_t l = 0; l < q2.size(); ++l)
        q2d = std::max(q2d, std::abs(q2[l] - s.q2_init[l]));
      double vals[] = {op.psi_form,
                       op.phi_align,
                       op.coherence,
                       op.psi_mem,
                       op.phi_role,
                       op.phi_sync,
                       tbar,
                       s.q1(strict_q1),
                       static_cast<double>(q2d),
                       s.q3()};
      for (std::size_t k = 0; k < res.series.size(); ++k)
        res.series[k].second.push_back(vals[k]);
    };

    EventLog log;
    res.final_config =
        simulate(std::move(c), rc.model, rc.horizon, rc.seed, &log, observe,
                 rc.stride);

    write_event_log_csv((dir / "events.csv").string(), log);
    write_observables_csv((dir / "observables.csv").string(), res.times,
                          res.series);
    write_text_file((dir / "snapshot.json").string(),
                    snapshot_to_json(res.final_config).dump(2) + "\n");

    // Summary over the stationary window (second half of the samples).
    json summary;
    summary["run"] = {{"seed", rc.seed},
                      {"horizon", rc.horizon},
                      {"stride", rc.stride},
                      {"samples", res.times.size()}};
    const std::vector<double>& mean_T = res.series[6].second;
    WindowStats tw = window_stats(mean_T);
    json obs = json::object();
    for (std::size_t k = 0; k < 6; ++k) {
      WindowStats w = window_stats(res.series[k].second);
      json entry = stats_json(w);
      if (tw.mean > 0 && w.count >= 2)
        entry["susceptibility"] =
            w.var / (static_cast<double>(rc.model.n_agents) * tw.mean);
      obs[res.series[k].first] = entry;
    }
    obs["mean_T"] = stats_json(tw);
    summary["observables"] = obs;

    const std::vector<double>& q1s = res.series[7].second;
    const std::vector<double>& q2s = res.series[8].second;
    const std::vector<double>& q3s = res.series[9].second;
    double q1d = 0, q2d = 0, q3d = 0;
    for (double v : q1s) q1d = std::max(q1d, std::abs(v - res.final_config.q1_init));
    for (double v : q2s) q2d = std::max(q2d, v);
    double q3ref = std::abs(res.final_config.q3_init);
    for (double v : q3s)
      q3d = std::max(q3d, std::abs(v - res.final_config.q3_init) / (1.0 + q3ref));
    summary["conservation"] = {{"q1_drift_max", q1d},
                               {"q2_drift_max", q2d},
                               {"q3_rel_drift_max", q3d}};

    std::map<std::string, long> counts;
    for (const EventRecord& e : log) counts[e.kind] += 1;
    summary["events"] = counts;

    summary["timescales"] =
        timescale_report(rc, res.final_config, res.times,
                         res.series[1].second, res.series[2].second);

    std::vector<std::string> violations = validate(res.final_config, rc.model);
    summary["validation"] = violations;

    res.summary = summary;
    write_text_file((dir / "summary.json").string(), summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    // Flag the partial artifact before propagating.
    write_text_file((dir / "error.txt").string(), std::string(e.what()) + "\n");
    throw;
  }
  return res;
}

nlohmann::json sweep_simulation(const RunConfig& rc,
                                const std::string& out_dir) {
  if (rc.sweep_axes.empty())
    throw std::invalid_argument("sweep requires at least one axis");
  prepare_dir(out_dir, "sweep.csv");
  const fs::path dir(out_dir);

  std::size_t points = 1;
  for (const auto& [name, vals] : rc.sweep_axes) points *= vals.size();
  const std::size_t reps = static_cast<std::size_t>(rc.replicates);
  const std::size_t total = points * reps;

  struct PointOut {
    bool ok = false;
    std::string error;
    std::uint64_t seed = 0;
    std::vector<double> axis_values;
    json summary;
  };
  std::vector<PointOut> out(total);

  auto point_values = [&rc](std::size_t point) {
    std::vector<double> vals;
    std::size_t rest = point;
    for (const auto& [name, axis] : rc.sweep_axes) {
      vals.push_back(axis[rest % axis.size()]);
      rest /= axis.size();
    }
    return vals;
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t g = next.fetch_add(1);
      if (g >= total) return;
      std::size_t point = g / reps;
      std::size_t rep = g % reps;
      PointOut& po = out[g];
      po.axis_values = point_values(point);
      po.seed = rc.seed ^ static_cast<std::uint64_t>(g);
      std::ostringstream sub;
      sub << "p" << point << "_r" << rep;
      try {
        RunConfig prc = rc;
        prc.sweep_axes.clear();
        prc.seed = po.seed;
        for (std::size_t a = 0; a < rc.sweep_axes.size(); ++a)
          apply_axis(prc.model, rc.sweep_axes[a].first, po.axis_values[a]);
        RunResult r = run_simulation(prc, (dir / sub.str()).string());
        po.summary = r.summary;
        po.ok = true;
      } catch (const std::exception& e) {
        po.error = e.what();
      }
    }
  };

  int nw = std::max(1, std::min<int>(rc.workers, static_cast<int>(total)));
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < nw; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  // Aggregated CSV: one row per (point, replicate).
  const char* obs_names[] = {"psi_form", "phi_align", "coherence",
                             "psi_mem",  "phi_role",  "phi_sync"};
  std::ostringstream csv;
  csv << "point,replicate,seed,ok";
  for (const auto& [name, vals] : rc.sweep_axes) csv << "," << name;
  for (const char* n : obs_names)
    csv << "," << n << "_mean," << n << "_var," << n << "_chi";
  csv << "\n";
  json failures = json::array();
  for (std::size_t g = 0; g < total; ++g) {
    const PointOut& po = out[g];
    csv << (g / reps) << "," << (g % reps) << "," << po.seed << ","
        << (po.ok ? 1 : 0);
    for (double v : po.axis_values) csv << "," << format_double(v);
    for (const char* n : obs_names) {
      if (po.ok) {
        const json& e = po.summary.at("observables").at(n);
        csv << "," << format_double(e.at("mean").get<double>()) << ","
            << format_double(e.at("variance").get<double>()) << ",";
        if (e.contains("susceptibility"))
          csv << format_double(e.at("susceptibility").get<double>());
        else
          csv << "nan";
      } else {
        csv << ",nan,nan,nan";
      }
    }
    csv << "\n";
    if (!po.ok)
      failures.push_back({{"index", g}, {"error", po.error}});
  }
  write_text_file((dir / "sweep.csv").string(), csv.str());

  json summary;
  summary["points"] = points;
  summary["replicates"] = rc.replicates;
  summary["total_runs"] = total;
  summary["failures"] = failures;
  json axes = json::object();
  for (const auto& [name, vals] : rc.sweep_axes) axes[name] = vals;
  summary["axes"] = axes;
  write_text_file((dir / "sweep_summary.json").string(), summary.dump(2) + "\n");
  return summary;
}

}  // namespace trisim
