// End-to-end acceptance checks. Each criterion drives the engine through a
// scenario with an independently computable outcome (exact enumeration,
// closed-form integrals, conservation baselines, byte-level replay) and
// prints one PASS/FAIL line with its wall time. Wall-time budgets are part
// of the criteria. Exit status is the number of failing criteria.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "trisim/agent.hpp"
#include "trisim/config.hpp"
#include "trisim/dynamics.hpp"
#include "trisim/energy.hpp"
#include "trisim/exact.hpp"
#include "trisim/kernel.hpp"
#include "trisim/observables.hpp"
#include "trisim/rng.hpp"
#include "trisim/runner.hpp"
#include "trisim/serialize.hpp"
#include "trisim/stability.hpp"

using namespace trisim;

namespace {

struct Checker {
  bool pass = true;
  std::string fail_note;
  std::string stat;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!fail_note.empty()) fail_note += "; ";
    fail_note += what;
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// All stochastic forcings off, temperature pinned at T for every agent.
ModelParams frozen_temperature_params(int n, int m, double T) {
  ModelParams mp;
  mp.n_agents = n;
  mp.m = m;
  mp.dyn.T_0 = T;
  mp.dyn.kappa_T = 0;
  mp.dyn.gamma_relax = 0;
  mp.dyn.sigma_T = 0;
  mp.dyn.sigma_phi = 0;
  mp.dyn.sigma_theta = 0;
  mp.dyn.sigma_G = 0;
  mp.dyn.sigma_D = 0;
  return mp;
}

// Bit encoding used by the enumeration models: bit (i*m + l) set iff +1.
std::uint32_t encode_state(const Configuration& c) {
  std::uint32_t s = 0;
  const int m = c.m();
  for (int i = 0; i < c.n(); ++i)
    for (int l = 0; l < m; ++l)
      if (c.agents[static_cast<std::size_t>(i)]
              .opinion[static_cast<std::size_t>(l)] > 0)
        s |= 1u << (i * m + l);
  return s;
}

double total_variation(const std::vector<double>& a,
                       const std::vector<double>& b) {
  double tv = 0;
  for (std::size_t k = 0; k < a.size(); ++k) tv += std::abs(a[k] - b[k]);
  return 0.5 * tv;
}

// Least-squares slope of log-values against time, reported as a decay time.
double fit_decay_time(const std::vector<double>& t,
                      const std::vector<double>& logc) {
  const double n = static_cast<double>(t.size());
  double st = 0, sc = 0, stt = 0, stc = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sc += logc[i];
    stt += t[i] * t[i];
    stc += t[i] * logc[i];
  }
  const double slope = (n * stc - st * sc) / (n * stt - st * st);
  if (slope >= 0) return std::numeric_limits<double>::infinity();
  return -1.0 / slope;
}

// --- 1: per-component opinion sums are untouched by the exchange channel ----

Checker exchange_conservation() {
  Checker ck;
  ModelParams mp = frozen_temperature_params(12, 3, 10.0);
  mp.init.ring = true;
  mp.dyn.dt = 1e-3;
  mp.dyn.rate_exchange = 6e5;
  Configuration c = init_configuration(mp, 101);
  const std::vector<long> q2_0 = c.q2_init;

  EventLog log;
  c = simulate(c, mp, 1.0, 202, &log);

  long long attempts = 0, accepted = 0;
  for (const EventRecord& e : log)
    if (e.kind == "exchange") {
      ++attempts;
      if (e.detail.find("accepted") != std::string::npos) ++accepted;
    }
  ck.require(accepted >= 100000,
             "only " + std::to_string(accepted) + " accepted exchanges");
  ck.require(c.q2() == q2_0, "per-component opinion sums drifted");
  const auto viol = validate(c, mp);
  ck.require(viol.empty(), viol.empty() ? "" : viol.front());
  ck.stat = std::to_string(accepted) + "/" + std::to_string(attempts) +
            " swaps accepted, sums exact";
  return ck;
}

// --- 2: norm+reservoir budget survives birth/death churn and noisy play ----

Checker reservoir_conservation() {
  Checker ck;
  ModelParams mp;  // keeps the default noisy temperature channel on
  mp.n_agents = 12;
  mp.m = 1;
  mp.init.ring = true;
  mp.init.birth_headroom = 60;
  mp.dyn.dt = 1e-3;
  mp.dyn.rate_birth = 70;
  mp.dyn.rate_death = 50;
  mp.dyn.rate_role = 20;
  mp.dyn.sigma_phi = 0.2;
  mp.dyn.sigma_theta = 0.3;
  mp.dyn.sigma_G = 0.4;
  mp.dyn.sigma_D = 0.4;
  Configuration c = init_configuration(mp, 303);
  const double q1_0 = c.q1_init;

  long long block_steps = 0, last = 0;
  EventLog log;
  c = simulate(c, mp, 10.0, 404, &log, [&](const Configuration& s) {
    last = static_cast<long long>(s.blocks.size());
    block_steps += last;
  });
  block_steps -= last;  // the final snapshot feeds no further step

  long long births = 0, deaths = 0;
  for (const EventRecord& e : log) {
    if (e.kind == "birth" && e.detail == "ok") ++births;
    if (e.kind == "death") ++deaths;
  }
  const double drift = std::abs(c.q1() - q1_0);
  const double tol = 1e-9 * (1.0 + std::abs(q1_0));
  ck.require(births + deaths >= 500, "only " + std::to_string(births + deaths) +
                                         " accepted birth/death events");
  ck.require(block_steps >= 100000,
             "only " + std::to_string(block_steps) + " adversarial updates");
  ck.require(drift <= tol, "budget drifted by " + fmt(drift));
  const auto viol = validate(c, mp);
  ck.require(viol.empty(), viol.empty() ? "" : viol.front());
  ck.stat = std::to_string(births) + " births, " + std::to_string(deaths) +
            " deaths, " + std::to_string(block_steps) + " block updates, drift " +
            fmt(drift);
  return ck;
}

// --- 3: total node memory is conserved by the memory field over 1e5 steps ---

Checker memory_conservation() {
  Checker ck;
  ModelParams mp;  // default kappa_M drives the exchange field
  mp.n_agents = 6;
  mp.m = 1;
  mp.init.ring = true;
  mp.init.M_0 = 1.0;
  mp.init.M_jitter = 0.5;
  mp.dyn.dt = 1e-3;
  mp.dyn.kappa_K = 0.4;
  mp.dyn.sigma_phi = 0.2;
  mp.dyn.sigma_theta = 0.3;
  mp.dyn.sigma_G = 0.3;
  mp.dyn.sigma_D = 0.3;
  Configuration c = init_configuration(mp, 505);
  const double q3_0 = c.q3_init;

  c = simulate(c, mp, 100.0, 606);

  const double drift = std::abs(c.q3() - q3_0);
  const double tol = 1e-9 * (1.0 + std::abs(q3_0));
  ck.require(drift <= tol, "total memory drifted by " + fmt(drift));
  const auto viol = validate(c, mp);
  ck.require(viol.empty(), viol.empty() ? "" : viol.front());
  ck.stat = "100000 steps, drift " + fmt(drift);
  return ck;
}

// --- 4: random kernels integrate to their mass and the Markovian embedding
//        tracks the direct convolution ---------------------------------------

Checker kernel_embedding() {
  Checker ck;
  Rng rng(424242);
  double worst_mass = 0, worst_conv = 0;
  for (int trial = 0; trial < 20; ++trial) {
    KernelSpec k;
    double sum = 0;
    for (int j = 0; j < 3; ++j) {
      const double aj = rng.uniform_range(0.2, 1.0);
      k.a.push_back(aj);
      k.tau.push_back(0.05 * std::pow(200.0, rng.uniform()));  // [0.05, 10]
      sum += aj;
    }
    for (double& a : k.a) a /= sum;  // unit mass by construction

    worst_mass =
        std::max(worst_mass, std::abs(kernel_mass(k, 300.0, 300000) - 1.0));

    const double dt = 1e-4;
    const std::size_t n = 200001;  // t in [0, 20]
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = dt * static_cast<double>(i);
      u[i] = std::sin(2.0 * t) + 0.5 * std::cos(0.7 * t);
    }
    auto e = EmbeddingState::zero(k);
    std::size_t next = 25000;
    for (std::size_t i = 1; i < n; ++i) {
      // Midpoint drive keeps both discretizations second order.
      const double tm = dt * (static_cast<double>(i) - 0.5);
      embed_step(e, k, std::sin(2.0 * tm) + 0.5 * std::cos(0.7 * tm), dt);
      if (i == next) {
        const double ref = direct_convolution_at(k, u, dt, i);
        worst_conv = std::max(worst_conv, std::abs(e.value() - ref));
        next += 25000;
      }
    }
  }
  ck.require(worst_mass <= 1e-8, "kernel mass off by " + fmt(worst_mass));
  ck.require(worst_conv <= 1e-6, "embedding off by " + fmt(worst_conv));
  ck.stat = "20 kernels, mass err " + fmt(worst_mass) + ", convolution err " +
            fmt(worst_conv);
  return ck;
}

// --- 5: the exchange chain reaches the enumerated stationary law on its
//        conserved sector ----------------------------------------------------

Checker exchange_stationarity() {
  Checker ck;
  ModelParams mp = frozen_temperature_params(4, 1, 2.0);
  mp.init.triads = {{0, 1, 2}, {1, 2, 3}};
  mp.dyn.dt = 1e-3;
  mp.dyn.rate_exchange = 1e4;
  Configuration c = init_configuration(mp, 707);
  for (int i = 0; i < 4; ++i)
    c.agents[static_cast<std::size_t>(i)].opinion[0] =
        static_cast<std::int8_t>(i < 2 ? 1 : -1);
  c.record_baselines();

  const SmallModel sm =
      SmallModel::from_two_section(c.hyper, 1, mp.energy.J, 0.0, 0.0);
  const std::uint32_t start = encode_state(c);
  const RateModel rm = build_rate_matrix(sm, RateRule::Kawasaki,
                                         {2.0, 2.0, 2.0, 2.0},
                                         mp.dyn.rate_exchange, start);
  ck.require(!rm.reducible, "swap sector should be irreducible");
  std::map<std::uint32_t, std::size_t> index;
  for (std::size_t k = 0; k < rm.states.size(); ++k) index[rm.states[k]] = k;

  std::vector<long long> counts(rm.states.size(), 0);
  long long total = 0, outside = 0, seen = 0;
  const long long warm = 10000;
  c = simulate(c, mp, 100.0, 808, nullptr, [&](const Configuration& s) {
    if (++seen <= warm) return;
    const auto it = index.find(encode_state(s));
    if (it == index.end()) {
      ++outside;
      return;
    }
    ++counts[it->second];
    ++total;
  });
  ck.require(outside == 0, "left the conserved sector");
  ck.require(total > 50000, "too few samples");

  std::vector<double> emp(counts.size()), ref(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    emp[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
    ref[k] = rm.pi(static_cast<Eigen::Index>(k));
  }
  const double tv = total_variation(emp, ref);
  ck.require(tv <= 0.01, "TV distance " + fmt(tv));
  ck.stat = std::to_string(total) + " samples over " +
            std::to_string(counts.size()) + " states, TV " + fmt(tv);
  return ck;
}

// --- 6: partition function matches the closed form and the flip chain
//        samples the enumerated Gibbs law ------------------------------------

Checker flip_stationarity() {
  Checker ck;
  const GibbsResult g1 = enumerate_gibbs(SmallModel::triangle(1.0), 1.0);
  const double z_exact = 2.0 * std::exp(3.0) + 6.0 * std::exp(-1.0);
  ck.require(std::abs(g1.Z - z_exact) <= 1e-10 * z_exact,
             "triangle partition function off: " + fmt(g1.Z));

  const double T = 2.0;
  const GibbsResult g2 = enumerate_gibbs(SmallModel::triangle(1.0), T);
  std::map<std::uint32_t, std::size_t> index;
  for (std::size_t k = 0; k < g2.states.size(); ++k) index[g2.states[k]] = k;

  ModelParams mp = frozen_temperature_params(3, 1, T);
  mp.init.triads = {{0, 1, 2}};
  mp.dyn.dt = 1e-3;
  mp.dyn.rate_flip = 1e4;
  Configuration c = init_configuration(mp, 909);

  std::vector<long long> counts(g2.states.size(), 0);
  long long total = 0, seen = 0;
  const long long warm = 20000;
  c = simulate(c, mp, 200.0, 1010, nullptr, [&](const Configuration& s) {
    if (++seen <= warm) return;
    ++counts[index.at(encode_state(s))];
    ++total;
  });

  std::vector<double> emp(counts.size()), ref(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    emp[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
    ref[k] = g2.p[k];
  }
  const double tv = total_variation(emp, ref);
  ck.require(tv <= 0.01, "TV distance " + fmt(tv));
  ck.stat = "Z err " + fmt(std::abs(g1.Z - z_exact) / z_exact) + ", " +
            std::to_string(total) + " samples, TV " + fmt(tv);
  return ck;
}

// --- 7: the adversarial flow settles to its saddle from random starts -------

double saddle_residual(const Configuration& c, const ModelParams& mp) {
  const GanBlock& b = c.blocks[0].gan;
  const GanEval ev = gan_objective(b, c.triad_summary(0, mp.p),
                                   c.blocks[0].success_filt.value(), mp.energy);
  double r = 0;
  for (double v : ev.grad_D) r = std::max(r, std::abs(v));
  for (int m = 0; m < 2; ++m) {
    // Generators live on spheres; only the tangential gradient can vanish.
    const std::vector<double>& G = m == 0 ? b.G1 : b.G2;
    const std::vector<double>& gr = m == 0 ? ev.grad_G1 : ev.grad_G2;
    double dot = 0, nrm = 0;
    for (std::size_t i = 0; i < G.size(); ++i) {
      dot += gr[i] * G[i];
      nrm += G[i] * G[i];
    }
    for (std::size_t i = 0; i < G.size(); ++i)
      r = std::max(r, std::abs(gr[i] - dot / nrm * G[i]));
  }
  return r;
}

Checker adversarial_saddle() {
  Checker ck;
  ModelParams mp = frozen_temperature_params(3, 1, 1.0);
  mp.c_D = 0.0;  // unconstrained discriminator
  mp.init.triads = {{0, 1, 2}};
  mp.dyn.dt = 1e-2;
  mp.dyn.eta_gan = 1.0;
  const Configuration base = init_configuration(mp, 1111);

  double xnorm = 0;
  for (double v : base.triad_summary(0, mp.p)) xnorm += v * v;
  ck.require(xnorm > 1e-4, "degenerate pooled summary");

  Rng rng(1212);
  int converged = 0, worst_steps = 0;
  double worst_res = 0;
  for (int start = 0; start < 50; ++start) {
    Configuration c = base;
    c.blocks[0].gan = fresh_triad_block(mp, rng).gan;
    for (double& v : c.blocks[0].gan.D) v = 0.5 * rng.normal();
    int steps = 0;
    double res = saddle_residual(c, mp);
    while (steps < 100000 && res > 1e-6) {
      gan_step(c, mp, rng, mp.dyn.dt);
      if (++steps % 25 == 0) res = saddle_residual(c, mp);
    }
    res = saddle_residual(c, mp);
    if (res <= 1e-6) {
      ++converged;
      worst_steps = std::max(worst_steps, steps);
    }
    worst_res = std::max(worst_res, res);
  }
  ck.require(converged == 50, std::to_string(converged) +
                                  "/50 starts converged, worst residual " +
                                  fmt(worst_res));
  ck.stat = "50/50 starts, worst " + std::to_string(worst_steps) +
            " steps, residual <= 1e-6";
  return ck;
}

// --- 8: analytic gradients agree with central differences -------------------

Checker gradient_consistency() {
  Checker ck;
  Rng rng(1313);
  double worst = 0;
  int checks = 0;

  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t p = 4;
    GanBlock b;
    b.G1.resize(p);
    b.G2.resize(p);
    b.D.resize(p);
    for (auto* v : {&b.G1, &b.G2}) {
      double nrm = 0;
      for (double& x : *v) {
        x = rng.normal();
        nrm += x * x;
      }
      for (double& x : *v) x /= std::sqrt(nrm);
    }
    for (double& x : b.D) x = rng.normal();
    std::vector<double> xbar(p);
    for (double& x : xbar) x = rng.normal();
    const double mf = rng.uniform_range(-1.0, 1.0);
    EnergyParams ep;
    ep.lambda_mem = rng.uniform();

    const GanEval ev = gan_objective(b, xbar, mf, ep);
    auto fd = [&](std::vector<double>& x, std::size_t i) {
      const double keep = x[i];
      const double h = 1e-5 * (1.0 + std::abs(keep));
      x[i] = keep + h;
      const double vp = gan_objective(b, xbar, mf, ep).value;
      x[i] = keep - h;
      const double vm = gan_objective(b, xbar, mf, ep).value;
      x[i] = keep;
      return (vp - vm) / (2.0 * h);
    };
    for (std::size_t i = 0; i < p; ++i) {
      const double pairs[3][2] = {{ev.grad_G1[i], fd(b.G1, i)},
                                  {ev.grad_G2[i], fd(b.G2, i)},
                                  {ev.grad_D[i], fd(b.D, i)}};
      for (const auto& pr : pairs) {
        worst = std::max(worst,
                         std::abs(pr[0] - pr[1]) / (1.0 + std::abs(pr[0])));
        ++checks;
      }
    }
  }

  ModelParams mp0;
  mp0.n_agents = 6;
  mp0.m = 1;
  mp0.init.ring = true;
  Configuration c = init_configuration(mp0, 1414);
  for (int trial = 0; trial < 50; ++trial) {
    EnergyParams ep;
    ep.a_site = rng.uniform_range(0.05, 0.3);
    ep.g_tri = rng.uniform_range(-1.0, 1.0);
    ep.h_pair = rng.uniform_range(0.0, 0.2);
    for (auto& a : c.agents) a.phi = rng.normal();
    std::vector<double> grad;
    formation_potential(c, ep, &grad);
    const int i = static_cast<int>(rng.index(6));
    auto& phi = c.agents[static_cast<std::size_t>(i)].phi;
    const double keep = phi;
    const double h = 1e-5 * (1.0 + std::abs(keep));
    phi = keep + h;
    const double vp = formation_potential(c, ep, nullptr);
    phi = keep - h;
    const double vm = formation_potential(c, ep, nullptr);
    phi = keep;
    const double fdv = (vp - vm) / (2.0 * h);
    const double g = grad[static_cast<std::size_t>(i)];
    worst = std::max(worst, std::abs(g - fdv) / (1.0 + std::abs(g)));
    ++checks;
  }
  ck.require(worst <= 1e-6, "worst relative gradient error " + fmt(worst));
  ck.stat = std::to_string(checks) + " coordinate checks, worst rel err " +
            fmt(worst);
  return ck;
}

// --- 9: jump-sector entropy production vanishes in equilibrium and is
//        strictly positive across a temperature gradient ---------------------

Checker entropy_production() {
  Checker ck;
  const SmallModel sm = SmallModel::triangle(1.0);
  const RateModel hb = build_rate_matrix(sm, RateRule::HeatBath, {1, 1, 1}, 1.0);
  const EntropyProduction p0 = entropy_production_jump(hb.K, hb.pi);
  ck.require(!p0.infinite && std::abs(p0.value) <= 1e-12,
             "uniform heat-bath production " + fmt(p0.value));

  const RateModel mt =
      build_rate_matrix(sm, RateRule::Metropolis, {1, 1, 1}, 1.0);
  const EntropyProduction p1 = entropy_production_jump(mt.K, mt.pi);
  ck.require(!p1.infinite && std::abs(p1.value) <= 1e-12,
             "uniform Metropolis production " + fmt(p1.value));

  const RateModel ne =
      build_rate_matrix(sm, RateRule::HeatBath, {1.0, 2.0, 1.0}, 1.0);
  const EntropyProduction p2 = entropy_production_jump(ne.K, ne.pi);
  ck.require(!p2.infinite, "graded chain should have finite production");
  ck.require(p2.value > 1e-8, "graded production not positive: " + fmt(p2.value));
  ck.stat = "balanced 0, graded " + fmt(p2.value);
  return ck;
}

// --- 10: frozen-temperature coherence matches exact enumeration at two
//         temperatures with disjoint confidence intervals --------------------

Checker coherence_vs_enumeration() {
  Checker ck;
  auto exact_coherence = [](double T) {
    const double zb = 2.0 * std::exp(3.0 / T) + 6.0 * std::exp(-1.0 / T);
    return (2.0 * std::exp(3.0 / T) - 2.0 * std::exp(-1.0 / T)) / zb;
  };
  auto run_mean = [](double T, std::uint64_t seed) {
    ModelParams mp = frozen_temperature_params(3, 1, T);
    mp.init.triads = {{0, 1, 2}};
    mp.dyn.dt = 1e-3;
    mp.dyn.rate_flip = 2000;
    Configuration c = init_configuration(mp, 2020 + seed);
    double sum = 0;
    long long n = 0, seen = 0;
    const long long warm = 10000;
    simulate(c, mp, 50.0, 5050 + seed, nullptr, [&](const Configuration& s) {
      if (++seen <= warm) return;
      sum += order_parameters(s).coherence;
      ++n;
    });
    return sum / static_cast<double>(n);
  };

  const double temps[2] = {0.5, 5.0};
  double mean[2], half999[2], half99[2];
  for (int z = 0; z < 2; ++z) {
    std::vector<double> means;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
      means.push_back(run_mean(temps[z], 100 * static_cast<std::uint64_t>(z) + seed));
    double mu = 0;
    for (double v : means) mu += v;
    mu /= 10.0;
    double var = 0;
    for (double v : means) var += (v - mu) * (v - mu);
    var /= 9.0;
    const double se = std::sqrt(var / 10.0);
    mean[z] = mu;
    half999[z] = 4.781 * se;  // two-sided 99.9% t, 9 dof
    half99[z] = 3.250 * se;   // two-sided 99% t, 9 dof
    const double exact = exact_coherence(temps[z]);
    ck.require(std::abs(mu - exact) <= half999[z],
               "T=" + fmt(temps[z]) + ": mean " + fmt(mu) + " vs exact " +
                   fmt(exact) + " (CI half-width " + fmt(half999[z]) + ")");
  }
  ck.require(mean[0] - mean[1] >= 0.3, "temperature contrast too small");
  ck.require(mean[0] - half99[0] > mean[1] + half99[1],
             "confidence intervals overlap");
  ck.stat = "cold " + fmt(mean[0]) + " vs " + fmt(exact_coherence(0.5)) +
            ", hot " + fmt(mean[1]) + " vs " + fmt(exact_coherence(5.0));
  return ck;
}

// --- 11: the sampled coherence autocorrelation time matches the generator's
//         exact prediction within 20% ----------------------------------------

Checker relaxation_time() {
  Checker ck;
  const double T = 2.0, rate = 500.0, dt = 1e-3;
  const SmallModel sm = SmallModel::triangle(1.0);
  const RateModel rm = build_rate_matrix(sm, RateRule::HeatBath, {T, T, T}, rate);
  const int S = static_cast<int>(rm.states.size());

  Eigen::VectorXd f(S);
  for (int k = 0; k < S; ++k) {
    const std::uint32_t st = rm.states[static_cast<std::size_t>(k)];
    const int s0 = sm.spin(st, 0, 0), s1 = sm.spin(st, 1, 0),
              s2 = sm.spin(st, 2, 0);
    f(k) = (s0 * s1 + s0 * s2 + s1 * s2) / 3.0;
  }
  const Eigen::VectorXd pi = rm.pi;
  const double mu = pi.dot(f);

  // Reversible generator: symmetrize in the pi-weighted inner product and
  // evaluate the exact autocovariance through the spectral decomposition.
  const Eigen::VectorXd sq = pi.array().sqrt().matrix();
  const Eigen::MatrixXd sym =
      sq.asDiagonal() * rm.K * sq.cwiseInverse().asDiagonal();
  const double asym = (sym - sym.transpose()).cwiseAbs().maxCoeff();
  ck.require(asym <= 1e-8, "generator is not reversible: " + fmt(asym));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (sym + sym.transpose()));
  const Eigen::VectorXd w = es.eigenvectors().transpose() * (sq.asDiagonal() * f);
  auto c_exact = [&](double t) {
    double acc = 0;
    for (int k = 0; k < S; ++k)
      acc += w(k) * w(k) * std::exp(es.eigenvalues()(k) * t);
    return acc - mu * mu;
  };

  const double c0 = c_exact(0.0);
  std::vector<int> lags;
  std::vector<double> lag_t, log_exact;
  for (int k = 1; k <= 2000; ++k) {
    const double r = c_exact(k * dt) / c0;
    if (r < 0.05) break;
    if (r <= 0.7) {
      lags.push_back(k);
      lag_t.push_back(k * dt);
      log_exact.push_back(std::log(c_exact(k * dt)));
    }
  }
  ck.require(lags.size() >= 3, "fit window too narrow");
  const double tau_exact = fit_decay_time(lag_t, log_exact);

  ModelParams mp = frozen_temperature_params(3, 1, T);
  mp.init.triads = {{0, 1, 2}};
  mp.dyn.dt = dt;
  mp.dyn.rate_flip = rate;
  Configuration c = init_configuration(mp, 3030);
  std::vector<double> series;
  series.reserve(200002);
  simulate(c, mp, 200.0, 3131, nullptr, [&](const Configuration& s) {
    series.push_back(order_parameters(s).coherence);
  });
  const std::size_t burn = series.size() / 10;
  const std::vector<double> x(series.begin() + static_cast<long>(burn),
                              series.end());
  double xm = 0;
  for (double v : x) xm += v;
  xm /= static_cast<double>(x.size());

  std::vector<double> log_emp;
  bool positive = true;
  for (std::size_t j = 0; j < lags.size() && positive; ++j) {
    const std::size_t k = static_cast<std::size_t>(lags[j]);
    double acc = 0;
    const std::size_t cnt = x.size() - k;
    for (std::size_t t = 0; t < cnt; ++t)
      acc += (x[t] - xm) * (x[t + k] - xm);
    const double cv = acc / static_cast<double>(cnt);
    if (cv <= 0)
      positive = false;
    else
      log_emp.push_back(std::log(cv));
  }
  ck.require(positive, "autocovariance lost positivity inside the window");
  if (positive) {
    const double tau_sim = fit_decay_time(lag_t, log_emp);
    ck.require(std::abs(tau_sim - tau_exact) <= 0.2 * tau_exact,
               "tau " + fmt(tau_sim) + " vs exact " + fmt(tau_exact));
    ck.stat = "tau " + fmt(tau_sim) + " vs exact " + fmt(tau_exact) + " over " +
              std::to_string(lags.size()) + " lags";
  }
  return ck;
}

// --- 12: zero-temperature basins of the triangle are recovered exactly ------

Checker basin_structure() {
  Checker ck;
  const BasinDecomposition bd = basin_decomposition(SmallModel::triangle(1.0));
  ck.require(bd.attractors == std::vector<std::uint32_t>({0, 7}),
             "symmetric triangle should have the two aligned attractors");
  ck.require(bd.basin_sizes == std::vector<std::size_t>({4, 4}),
             "symmetric basins should split 4/4");
  bool mapped = true;
  for (std::size_t k = 0; k < bd.states.size(); ++k) {
    const int ups = std::popcount(bd.states[k]);
    mapped = mapped && bd.basin_of[k] == (ups >= 2 ? 1 : 0);
  }
  ck.require(mapped, "majority rule violated by the basin map");

  const BasinDecomposition tilted =
      basin_decomposition(SmallModel::triangle(1.0, 10.0));
  ck.require(tilted.attractors == std::vector<std::uint32_t>({7}),
             "strong field should leave a single attractor");
  ck.require(tilted.basin_sizes == std::vector<std::size_t>({8}),
             "single basin should cover all states");
  ck.stat = "4/4 split without field, single basin of 8 with field";
  return ck;
}

// --- 13: stability certificates: polynomial margins, synchronization,
//         memory-operator bound, and monotone descent ------------------------

Checker stability_certificates() {
  Checker ck;
  // (x+1)(x+2)(x+3)(x+4): margins 10, 300, 12600, 24.
  const RouthHurwitz rh = routh_hurwitz4(10, 35, 50, 24);
  ck.require(rh.stable && !rh.boundary, "product of stable roots flagged");
  ck.require(std::abs(rh.margins[0] - 10) <= 1e-9 &&
                 std::abs(rh.margins[1] - 300) <= 1e-9 &&
                 std::abs(rh.margins[2] - 12600) <= 1e-6 &&
                 std::abs(rh.margins[3] - 24) <= 1e-9,
             "margins off");
  // (x-1)(x+1)(x+2)(x+3) has a positive root.
  ck.require(!routh_hurwitz4(5, 5, -5, -6).stable, "unstable root missed");

  const Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
  const MasterStability ms = master_stability(-I2, I2, {0.0, 0.5, 1.0, 2.0});
  ck.require(ms.synchronizes, "contracting blocks should synchronize");
  bool msf_vals = true;
  for (std::size_t k = 0; k < ms.alpha.size(); ++k)
    msf_vals = msf_vals && std::abs(ms.lambda[k] - (-1.0 - ms.alpha[k])) <= 1e-9;
  ck.require(msf_vals, "master stability values off");
  ck.require(!master_stability(I2, I2, {0.0, 0.5}).synchronizes,
             "expanding blocks should fail at alpha=0");

  const Eigen::MatrixXd J = -0.2 * Eigen::MatrixXd::Identity(3, 3);
  const MemoryBound mb =
      memory_operator_bound(J, KernelSpec::standard(), 10.0, 0.5);
  const double mass_exact = 0.6 * (1.0 - std::exp(-100.0)) +
                            0.3 * (1.0 - std::exp(-10.0)) +
                            0.1 * (1.0 - std::exp(-1.0));
  ck.require(std::abs(mb.kernel_mass - mass_exact) <= 1e-6,
             "kernel mass " + fmt(mb.kernel_mass));
  ck.require(std::abs(mb.j_norm - 0.2) <= 1e-12, "operator norm off");
  ck.require(std::abs(mb.bound - 0.2 * mb.kernel_mass) <= 1e-12, "bound off");
  ck.require(mb.bound_ok, "bound should clear the threshold");
  ck.require(std::abs(mb.s_norm - std::exp(-0.2 * mb.kernel_mass)) <= 1e-9,
             "frozen propagator norm off");
  ck.require(mb.contracting, "frozen propagator should contract");

  // Deterministic descent of the closed-form energy along a quiet run.
  ModelParams mp = frozen_temperature_params(6, 1, 1.0);
  mp.init.ring = true;
  mp.energy.g_tri = 0;
  mp.energy.h_pair = 0;
  mp.energy.kappaM_stiff = 0;
  mp.energy.a_site = 0.2;
  mp.init.phi_0 = 1.0;
  mp.init.phi_jitter = 0.5;
  mp.dyn.dt = 1e-3;
  std::vector<Configuration> traj;
  Configuration c = init_configuration(mp, 4040);
  simulate(c, mp, 2.0, 4141, nullptr,
           [&](const Configuration& s) { traj.push_back(s); }, 10);
  const auto pts = lyapunov_check(traj, mp, 10 * mp.dyn.dt);
  ck.require(pts.size() >= 10, "trajectory too short");
  double maxdv = -std::numeric_limits<double>::infinity();
  for (const auto& pt : pts) maxdv = std::max(maxdv, pt.dVdt);
  ck.require(maxdv <= 1e-8, "energy increased: max dV/dt " + fmt(maxdv));
  ck.require(pts.back().V < pts.front().V, "energy did not decrease");
  ck.stat = "margins exact, MSF exact, bound " + fmt(mb.bound) +
            ", max dV/dt " + fmt(maxdv);
  return ck;
}

// --- 14: identical configurations replay to byte-identical artifacts --------

Checker replay_determinism() {
  Checker ck;
  namespace fs = std::filesystem;
  const nlohmann::json jc = {
      {"model", {{"n_agents", 5}, {"m", 2}}},
      {"dyn",
       {{"dt", 1e-3},
        {"rate_exchange", 40.0},
        {"rate_flip", 30.0},
        {"rate_birth", 15.0},
        {"rate_death", 15.0},
        {"rate_role", 10.0},
        {"sigma_phi", 0.2},
        {"sigma_theta", 0.3},
        {"sigma_G", 0.3},
        {"sigma_D", 0.3}}},
      {"init", {{"ring", true}, {"birth_headroom", 6}}},
      {"run", {{"horizon", 0.5}, {"stride", 5}, {"seed", 20260819}}}};
  const RunConfig rc = config_from_json(jc);
  const fs::path base = fs::temp_directory_path() / "trisim_acceptance_replay";
  fs::remove_all(base);
  fs::create_directories(base);

  const RunResult a = run_simulation(rc, (base / "a").string());
  const RunResult b = run_simulation(rc, (base / "b").string());
  for (const char* name :
       {"config.json", "events.csv", "observables.csv", "snapshot.json"}) {
    const std::string ta = read_text_file((fs::path(a.dir) / name).string());
    const std::string tb = read_text_file((fs::path(b.dir) / name).string());
    ck.require(!ta.empty(), std::string(name) + " is empty");
    ck.require(ta == tb, std::string(name) + " differs between identical runs");
  }

  RunConfig other = rc;
  other.seed = 777;
  const RunResult d = run_simulation(other, (base / "c").string());
  ck.require(read_text_file((fs::path(a.dir) / "events.csv").string()) !=
                 read_text_file((fs::path(d.dir) / "events.csv").string()),
             "event trace ignored the seed");
  fs::remove_all(base);
  ck.stat = "4 artifacts byte-identical, seed changes the trace";
  return ck;
}

struct Criterion {
  const char* name;
  double budget_s;
  Checker (*fn)();
};

}  // namespace

int main() {
  const Criterion table[] = {
      {"exchange-conservation", 10, exchange_conservation},
      {"reservoir-conservation", 30, reservoir_conservation},
      {"memory-conservation", 10, memory_conservation},
      {"kernel-embedding", 20, kernel_embedding},
      {"exchange-stationarity", 60, exchange_stationarity},
      {"flip-stationarity", 60, flip_stationarity},
      {"adversarial-saddle", 20, adversarial_saddle},
      {"gradient-consistency", 5, gradient_consistency},
      {"entropy-production", 5, entropy_production},
      {"coherence-vs-enumeration", 120, coherence_vs_enumeration},
      {"relaxation-time", 120, relaxation_time},
      {"basin-structure", 1, basin_structure},
      {"stability-certificates", 5, stability_certificates},
      {"replay-determinism", 30, replay_determinism},
  };
  const int total = static_cast<int>(sizeof(table) / sizeof(table[0]));
  int failures = 0;
  for (int i = 0; i < total; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Checker ck;
    try {
      ck = table[i].fn();
    } catch (const std::exception& e) {
      ck.pass = false;
      ck.fail_note = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool in_budget = secs <= table[i].budget_s;
    const bool ok = ck.pass && in_budget;
    if (!ok) ++failures;
    std::string note = ok ? ck.stat : ck.fail_note;
    if (!in_budget)
      note += std::string(note.empty() ? "" : "; ") + "over budget of " +
              fmt(table[i].budget_s) + "s";
    std::printf("[%2d/%d] %-26s %s  %6.1fs  %s\n", i + 1, total, table[i].name,
                ok ? "PASS" : "FAIL", secs, note.c_str());
  }
  std::printf("%d/%d criteria passed\n", total - failures, total);
  return failures == 0 ? 0 : 1;
}
