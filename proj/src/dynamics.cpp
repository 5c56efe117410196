#include "trisim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "trisim/energy.hpp"
#include "trisim/memory_field.hpp"

namespace trisim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string triad_str(const Triad& t) {
  std::ostringstream os;
  os << t[0] << "-" << t[1] << "-" << t[2];
  return os.str();
}

double triad_temperature(const Configuration& c, const Triad& t) {
  return (c.agents[static_cast<std::size_t>(t[0])].temperature +
          c.agents[static_cast<std::size_t>(t[1])].temperature +
          c.agents[static_cast<std::size_t>(t[2])].temperature) /
         3.0;
}

double graph_lambda_max(const TriadicHypergraph& h) {
  int n = h.n_agents();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : h.edges()) {
    double w = h.weight(e.first, e.second);
    L(e.first, e.first) += w;
    L(e.second, e.second) += w;
    L(e.first, e.second) -= w;
    L(e.second, e.first) -= w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  return es.eigenvalues().maxCoeff();
}

void check_diffusive_stability(const TriadicHypergraph& h, double coeff,
                               double dt, const char* what) {
  if (coeff <= 0) return;
  double max_deg = 0;
  for (int i = 0; i < h.n_agents(); ++i) {
    double deg = 0;
    for (int j : h.neighbors(i)) deg += h.weight(i, j);
    max_deg = std::max(max_deg, deg);
  }
  if (dt * coeff * 2.0 * max_deg < 2.0) return;
  if (dt * coeff * graph_lambda_max(h) < 2.0) return;
  throw std::invalid_argument(std::string(what) +
                              " step size violates diffusive stability");
}

double sq_norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

// Tangent-project the increment at g and renormalize to radius sqrt(c).
void sphere_update(std::vector<double>& g, const std::vector<double>& delta,
                   double c) {
  double g2 = sq_norm(g);
  if (g2 == 0) return;
  double proj = 0;
  for (std::size_t i = 0; i < g.size(); ++i) proj += delta[i] * g[i];
  proj /= g2;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += delta[i] - proj * g[i];
  double scale = std::sqrt(c / sq_norm(g));
  for (double& x : g) x *= scale;
}

}  // namespace

void temperature_step(Configuration& c, const ModelParams& mp, Rng& rng,
                      double dt) {
  const DynParams& d = mp.dyn;
  int n = c.n();
  std::vector<double> kap(static_cast<std::size_t>(n), d.kappa_T);
  double kap_max = d.kappa_T;
  if (d.alpha_memT != 0) {
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int j : c.hyper.neighbors(i)) {
        double dm = c.agents[static_cast<std::size_t>(i)].memory -
                    c.agents[static_cast<std::size_t>(j)].memory;
        s += c.hyper.weight(i, j) * dm * dm;
      }
      kap[static_cast<std::size_t>(i)] = d.kappa_T * (1.0 + d.alpha_memT * s);
      kap_max = std::max(kap_max, kap[static_cast<std::size_t>(i)]);
    }
  }
  check_diffusive_stability(c.hyper, kap_max, dt, "temperature");

  double tbar = 0;
  for (const auto& a : c.agents) tbar += a.temperature;
  tbar /= n;
  double eta_f = d.eta_0 == 0 ? 0.0 : d.eta_0 * std::exp(-d.E_a / tbar);

  bool noisy = d.sigma_T != 0 && d.gamma_relax != 0;
  std::vector<double> tnew(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& ai = c.agents[static_cast<std::size_t>(i)];
    double diff = 0, fric = 0;
    for (int j : c.hyper.neighbors(i)) {
      double w = c.hyper.weight(i, j);
      diff += w * (ai.temperature -
                   c.agents[static_cast<std::size_t>(j)].temperature);
      if (eta_f != 0) {
        double dphi = ai.phi - c.agents[static_cast<std::size_t>(j)].phi;
        fric += w * dphi * dphi;
      }
    }
    double drift = -kap[static_cast<std::size_t>(i)] * diff -
                   d.gamma_relax * (ai.temperature - d.T_0) - eta_f * fric;
    double t = ai.temperature + dt * drift;
    if (noisy)
      t += d.sigma_T * std::sqrt(2.0 * d.gamma_relax * ai.temperature * dt) *
           rng.normal();
    tnew[static_cast<std::size_t>(i)] = std::clamp(t, d.T_min, d.T_max);
  }
  for (int i = 0; i < n; ++i)
    c.agents[static_cast<std::size_t>(i)].temperature =
        tnew[static_cast<std::size_t>(i)];
}

void phi_step(Configuration& c, const ModelParams& mp, Rng& rng, double dt) {
  const DynParams& d = mp.dyn;
  int n = c.n();
  std::vector<double> grad;
  formation_potential(c, mp.energy, &grad);
  double amp = d.sigma_phi * std::sqrt(2.0 * dt);
  std::vector<double> pnew(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& ai = c.agents[static_cast<std::size_t>(i)];
    double diff = 0;
    for (int j : c.hyper.neighbors(i))
      diff += c.hyper.weight(i, j) *
              (ai.phi - c.agents[static_cast<std::size_t>(j)].phi);
    double p = ai.phi + dt * (-d.d_phi * diff - grad[static_cast<std::size_t>(i)]);
    if (d.sigma_phi != 0) p += amp * rng.normal();
    pnew[static_cast<std::size_t>(i)] = p;
  }
  for (int i = 0; i < n; ++i)
    c.agents[static_cast<std::size_t>(i)].phi = pnew[static_cast<std::size_t>(i)];
}

void theta_step(Configuration& c, const ModelParams& mp, Rng& rng, double dt) {
  const DynParams& d = mp.dyn;
  int n = c.n();
  std::vector<double> tnew(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& ai = c.agents[static_cast<std::size_t>(i)];
    double coup = 0;
    for (int j : c.hyper.neighbors(i))
      coup += c.hyper.weight(i, j) *
              std::sin(c.agents[static_cast<std::size_t>(j)].theta - ai.theta);
    double th = ai.theta + dt * (d.omega_0 + d.K_theta * coup);
    if (d.sigma_theta != 0)
      th += d.sigma_theta * std::sqrt(2.0 * ai.temperature * dt) * rng.normal();
    th = std::fmod(th, kTwoPi);
    if (th < 0) th += kTwoPi;
    tnew[static_cast<std::size_t>(i)] = th;
  }
  for (int i = 0; i < n; ++i)
    c.agents[static_cast<std::size_t>(i)].theta = tnew[static_cast<std::size_t>(i)];
}

void gan_step(Configuration& c, const ModelParams& mp, Rng& rng, double dt) {
  const DynParams& d = mp.dyn;
  std::size_t p = static_cast<std::size_t>(mp.p);
  for (std::size_t k = 0; k < c.blocks.size(); ++k) {
    const Triad& t = c.hyper.triads()[k];
    GanBlock& b = c.blocks[k].gan;
    GanEval ev = gan_objective(b, c.triad_summary(k, mp.p),
                               c.blocks[k].success_filt.value(), mp.energy);
    double T = triad_temperature(c, t);
    double amp_G = d.sigma_G * std::sqrt(2.0 * T * dt);
    double amp_D = d.sigma_D * std::sqrt(2.0 * T * dt);
    std::vector<double> dg1(p), dg2(p), dd(p);
    for (std::size_t i = 0; i < p; ++i) {
      dg1[i] = -dt * d.eta_gan * ev.grad_G1[i];
      dg2[i] = -dt * d.eta_gan * ev.grad_G2[i];
      dd[i] = dt * d.eta_gan * ev.grad_D[i];
    }
    if (d.sigma_G != 0)
      for (std::size_t i = 0; i < p; ++i) {
        dg1[i] += amp_G * rng.normal();
        dg2[i] += amp_G * rng.normal();
      }
    if (d.sigma_D != 0)
      for (std::size_t i = 0; i < p; ++i) dd[i] += amp_D * rng.normal();
    sphere_update(b.G1, dg1, mp.c_G);
    sphere_update(b.G2, dg2, mp.c_G);
    if (mp.c_D > 0) {
      sphere_update(b.D, dd, mp.c_D);
    } else {
      for (std::size_t i = 0; i < p; ++i) b.D[i] += dd[i];
    }
  }
}

void memory_step(Configuration& c, const ModelParams& mp, double dt) {
  if (mp.dyn.kappa_M == 0 && c.hyper.triads().empty()) return;
  std::vector<double> M(c.agents.size());
  for (std::size_t i = 0; i < M.size(); ++i) M[i] = c.agents[i].memory;
  std::vector<double> utilde(c.blocks.size());
  for (std::size_t k = 0; k < c.blocks.size(); ++k)
    utilde[k] = c.blocks[k].success_filt.value();
  Eigen::MatrixXd B = build_zero_sum_forcing(c.hyper);
  memory_field_step(M, c.hyper, B, utilde, mp.dyn.kappa_M, dt);
  for (std::size_t i = 0; i < M.size(); ++i) c.agents[i].memory = M[i];
}

void knowledge_step(Configuration& c, const ModelParams& mp, double dt) {
  if (mp.dyn.kappa_K == 0) return;
  double lam = std::min(1.0, dt * mp.dyn.kappa_K);
  std::size_t ng = c.agents.empty() ? 0 : c.agents[0].knowledge.p.size();
  std::vector<std::vector<double>> target(c.agents.size());
  std::vector<int> cnt(c.agents.size(), 0);
  for (std::size_t k = 0; k < c.hyper.triads().size(); ++k) {
    const Triad& t = c.hyper.triads()[k];
    for (int s = 0; s < 3; ++s) {
      int i = t[static_cast<std::size_t>(s)];
      auto& tg = target[static_cast<std::size_t>(i)];
      if (tg.empty()) tg.assign(ng, 0.0);
      for (int s2 = 0; s2 < 3; ++s2) {
        if (s2 == s) continue;
        const auto& pj =
            c.agents[static_cast<std::size_t>(t[static_cast<std::size_t>(s2)])]
                .knowledge.p;
        for (std::size_t g = 0; g < ng; ++g) tg[g] += pj[g];
        // two partners per incidence
      }
      cnt[static_cast<std::size_t>(i)] += 2;
    }
  }
  for (std::size_t i = 0; i < c.agents.size(); ++i) {
    if (cnt[i] == 0) continue;
    auto& p = c.agents[i].knowledge.p;
    double sum = 0;
    for (std::size_t g = 0; g < ng; ++g) {
      p[g] = (1.0 - lam) * p[g] + lam * target[i][g] / cnt[i];
      sum += p[g];
    }
    for (auto& x : p) x /= sum;
  }
}

void role_update(Configuration& c, const ModelParams& mp, int i,
                 std::size_t tidx, Rng& rng) {
  c.set_role(i, tidx, sample_role_heat_bath(c, mp, i, tidx, rng));
}

bool kawasaki_exchange(Configuration& c, const ModelParams& mp, int i, int j,
                       Rng& rng) {
  if (!c.hyper.has_edge(i, j))
    throw std::invalid_argument("exchange requires a 2-section edge");
  double dH = group_delta_swap(c, mp.energy, i, j);
  bool accept = dH <= 0;
  if (!accept) {
    double tbar = 0.5 * (c.agents[static_cast<std::size_t>(i)].temperature +
                         c.agents[static_cast<std::size_t>(j)].temperature);
    accept = rng.uniform() < std::exp(-dH / tbar);
  }
  if (accept)
    std::swap(c.agents[static_cast<std::size_t>(i)].opinion,
              c.agents[static_cast<std::size_t>(j)].opinion);
  return accept;
}

bool triad_birth(Configuration& c, const ModelParams& mp, Rng& rng,
                 Triad* born) {
  double cost = 2.0 * mp.c_G + mp.c_D;
  if (c.reservoir < cost - 1e-12) return false;
  int n = c.n();
  long long total = static_cast<long long>(n) * (n - 1) * (n - 2) / 6;

  std::vector<Triad> cand;
  if (total <= 20000) {
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int d = b + 1; d < n; ++d) {
          Triad t{a, b, d};
          if (!c.hyper.has_triad(t)) cand.push_back(t);
        }
  } else {
    std::set<Triad> pool;
    while (pool.size() < 20000) {
      int a = rng.index(n), b = rng.index(n), d = rng.index(n);
      if (a == b || a == d || b == d) continue;
      Triad t = make_triad(a, b, d);
      if (!c.hyper.has_triad(t)) pool.insert(t);
    }
    cand.assign(pool.begin(), pool.end());
  }
  if (cand.empty()) return false;

  TriadNeighborhood nb = TriadNeighborhood::build(c.hyper);
  std::vector<double> x(cand.size());
  double xmax = -1e300;
  for (std::size_t k = 0; k < cand.size(); ++k) {
    double e = formation_energy_candidate(c, mp, nb, cand[k]);
    x[k] = -e / triad_temperature(c, cand[k]);
    xmax = std::max(xmax, x[k]);
  }
  double z = 0;
  for (auto& v : x) {
    v = std::exp(v - xmax);
    z += v;
  }
  double u = rng.uniform() * z;
  std::size_t pick = 0;
  double acc = x[0];
  while (pick + 1 < x.size() && u >= acc) acc += x[++pick];
  const Triad t = cand[pick];

  c.hyper.add_triad(t);
  const auto& triads = c.hyper.triads();
  std::size_t idx = static_cast<std::size_t>(
      std::lower_bound(triads.begin(), triads.end(), t) - triads.begin());
  c.blocks.insert(c.blocks.begin() + static_cast<std::ptrdiff_t>(idx),
                  fresh_triad_block(mp, rng));
  c.reservoir -= cost;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      Edge e = make_edge(t[static_cast<std::size_t>(a)],
                         t[static_cast<std::size_t>(b)]);
      if (!c.edge_filt.count(e)) c.edge_filt[e] = EmbeddingState::zero(mp.kernel);
    }
  for (int slot = 0; slot < 3; ++slot)
    c.blocks[idx].roles[static_cast<std::size_t>(slot)] = sample_role_heat_bath(
        c, mp, t[static_cast<std::size_t>(slot)], idx, rng);
  if (born) *born = t;
  return true;
}

bool triad_death(Configuration& c, const ModelParams& mp, Rng& rng,
                 Triad* died) {
  std::size_t nt = c.hyper.triads().size();
  if (nt == 0) return false;
  TriadNeighborhood nb = TriadNeighborhood::build(c.hyper);
  std::vector<double> x(nt);
  double xmax = -1e300;
  for (std::size_t k = 0; k < nt; ++k) {
    double e = formation_energy(c, mp, nb, k) +
               mp.energy.gamma_mem * c.blocks[k].success_filt.value();
    x[k] = e / triad_temperature(c, c.hyper.triads()[k]);
    xmax = std::max(xmax, x[k]);
  }
  double z = 0;
  for (auto& v : x) {
    v = std::exp(v - xmax);
    z += v;
  }
  double u = rng.uniform() * z;
  std::size_t pick = 0;
  double acc = x[0];
  while (pick + 1 < x.size() && u >= acc) acc += x[++pick];

  const Triad t = c.hyper.triads()[pick];
  const GanBlock& b = c.blocks[pick].gan;
  double credit = sq_norm(b.G1) + sq_norm(b.G2);
  if (mp.c_D > 0) credit += sq_norm(b.D);
  c.reservoir += credit;
  c.hyper.remove_triad(t);
  c.blocks.erase(c.blocks.begin() + static_cast<std::ptrdiff_t>(pick));
  for (int a = 0; a < 3; ++a)
    for (int bb = a + 1; bb < 3; ++bb) {
      Edge e = make_edge(t[static_cast<std::size_t>(a)],
                         t[static_cast<std::size_t>(bb)]);
      if (!c.hyper.has_edge(e.first, e.second)) c.edge_filt.erase(e);
    }
  if (died) *died = t;
  return true;
}

bool opinion_flip(Configuration& c, const ModelParams& mp, int i, int l,
                  Rng& rng) {
  double dE = group_delta_flip(c, mp.energy, i, l);
  double T = c.agents[static_cast<std::size_t>(i)].temperature;
  double p = 1.0 / (1.0 + std::exp(dE / T));
  if (rng.uniform() < p) {
    auto& s = c.agents[static_cast<std::size_t>(i)].opinion[static_cast<std::size_t>(l)];
    s = static_cast<std::int8_t>(-s);
    return true;
  }
  return false;
}

Configuration simulate(Configuration c, const ModelParams& mp, double horizon,
                       std::uint64_t seed, EventLog* log,
                       const std::function<void(const Configuration&)>& observer,
                       int stride) {
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  const DynParams& d = mp.dyn;
  Rng rng(seed);
  long long nsteps = std::llround(horizon / d.dt);
  double base_time = c.time;

  auto record = [&](const char* kind, int agent, const std::string& triad,
                    const std::string& detail) {
    if (log) log->push_back({c.time, kind, agent, triad, detail});
  };

  if (observer) observer(c);
  for (long long step = 1; step <= nsteps; ++step) {
    temperature_step(c, mp, rng, d.dt);
    phi_step(c, mp, rng, d.dt);
    theta_step(c, mp, rng, d.dt);
    gan_step(c, mp, rng, d.dt);
    memory_step(c, mp, d.dt);
    knowledge_step(c, mp, d.dt);
    update_filters(c, mp, d.dt);
    c.time = base_time + static_cast<double>(step) * d.dt;

    if (d.rate_role > 0) {
      long long cnt = rng.poisson(d.rate_role * d.dt);
      for (long long e = 0; e < cnt; ++e) {
        std::size_t ninc = 3 * c.hyper.triads().size();
        if (ninc == 0) break;
        std::size_t r = rng.index(ninc);
        std::size_t tidx = r / 3;
        int slot = static_cast<int>(r % 3);
        const Triad& t = c.hyper.triads()[tidx];
        int agent = t[static_cast<std::size_t>(slot)];
        Role before = c.blocks[tidx].roles[static_cast<std::size_t>(slot)];
        role_update(c, mp, agent, tidx, rng);
        Role after = c.blocks[tidx].roles[static_cast<std::size_t>(slot)];
        record("role", agent, triad_str(t),
               std::string(role_name(before)) + ">" + role_name(after));
      }
    }
    if (d.rate_exchange > 0) {
      long long cnt = rng.poisson(d.rate_exchange * d.dt);
      for (long long e = 0; e < cnt; ++e) {
        auto edges = c.hyper.edges();
        if (edges.empty()) break;
        const Edge& ed = edges[rng.index(edges.size())];
        bool ok = kawasaki_exchange(c, mp, ed.first, ed.second, rng);
        std::ostringstream os;
        os << "j=" << ed.second << (ok ? " accepted" : " rejected");
        record("exchange", ed.first, "", os.str());
      }
    }
    if (d.rate_birth > 0) {
      long long cnt = rng.poisson(d.rate_birth * d.dt);
      for (long long e = 0; e < cnt; ++e) {
        Triad t;
        if (triad_birth(c, mp, rng, &t))
          record("birth", -1, triad_str(t), "ok");
        else
          record("birth", -1, "", "rejected");
      }
    }
    if (d.rate_death > 0) {
      long long cnt = rng.poisson(d.rate_death * d.dt);
      for (long long e = 0; e < cnt; ++e) {
        Triad t;
        if (triad_death(c, mp, rng, &t))
          record("death", -1, triad_str(t), "");
      }
    }
    if (d.rate_flip > 0) {
      long long cnt = rng.poisson(d.rate_flip * d.dt);
      for (long long e = 0; e < cnt; ++e) {
        int i = static_cast<int>(rng.index(static_cast<std::size_t>(c.n())));
        int l = static_cast<int>(rng.index(static_cast<std::size_t>(c.m())));
        bool ok = opinion_flip(c, mp, i, l, rng);
        std::ostringstream os;
        os << "l=" << l << (ok ? " flipped" : " held");
        record("flip", i, "", os.str());
      }
    }

    if (observer && step % stride == 0) observer(c);
  }
  return c;
}

}  // namespace trisim
