#include "trisim/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trisim {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double na = std::sqrt(dot(a, a)), nb = std::sqrt(dot(b, b));
  if (na == 0 || nb == 0) return 0;
  return dot(a, b) / (na * nb);
}

double opinion_dot(const AgentState& a, const AgentState& b) {
  double s = 0;
  for (std::size_t l = 0; l < a.opinion.size(); ++l)
    s += static_cast<double>(a.opinion[l]) * static_cast<double>(b.opinion[l]);
  return s;
}

double opinion_dist2(const AgentState& a, const AgentState& b) {
  double s = 0;
  for (std::size_t l = 0; l < a.opinion.size(); ++l) {
    double d = static_cast<double>(a.opinion[l]) - static_cast<double>(b.opinion[l]);
    s += d * d;
  }
  return s;
}

// Triad-mean node field, one value per active triad.
std::vector<double> triad_mean_field(const Configuration& c) {
  std::vector<double> f(c.hyper.triads().size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Triad& t = c.hyper.triads()[k];
    f[k] = (c.agents[static_cast<std::size_t>(t[0])].phi +
            c.agents[static_cast<std::size_t>(t[1])].phi +
            c.agents[static_cast<std::size_t>(t[2])].phi) /
           3.0;
  }
  return f;
}

}  // namespace

double role_local_energy(const Configuration& c, const ModelParams& mp, int i,
                         std::size_t tidx) {
  const Triad& t = c.hyper.triads().at(tidx);
  int slot = Configuration::member_slot(t, i);
  int j = t[static_cast<std::size_t>((slot + 1) % 3)];
  int k = t[static_cast<std::size_t>((slot + 2) % 3)];
  const auto& ai = c.agents[static_cast<std::size_t>(i)];
  const auto& aj = c.agents[static_cast<std::size_t>(j)];
  const auto& ak = c.agents[static_cast<std::size_t>(k)];
  KnowledgeState bar = barycenter2(aj.knowledge, ak.knowledge);
  double w2 = wasserstein2_sq(ai.knowledge, bar);
  std::vector<std::int8_t> med = median_opinion(aj.opinion, ak.opinion);
  double dh = hamming_to_median(ai.opinion, med);
  return mp.energy.alpha_role * w2 + mp.energy.beta_role * dh;
}

double role_delta_energy(const Configuration& c, const ModelParams& mp, int i,
                         std::size_t tidx, Role rp) {
  const Triad& t = c.hyper.triads().at(tidx);
  int slot = Configuration::member_slot(t, i);
  double e = role_local_energy(c, mp, i, tidx);
  for (int s = 0; s < 3; ++s) {
    if (s == slot) continue;
    Role rj = c.blocks[tidx].roles[static_cast<std::size_t>(s)];
    e += mp.energy.gamma_role *
         mp.energy.role_compat_at(static_cast<int>(rp), static_cast<int>(rj));
  }
  e += mp.energy.lambda_role *
       c.role_filt[static_cast<std::size_t>(rp)].value();
  return e;
}

std::array<double, 3> role_delta_energies(const Configuration& c,
                                          const ModelParams& mp, int i,
                                          std::size_t tidx) {
  return {role_delta_energy(c, mp, i, tidx, Role::G1),
          role_delta_energy(c, mp, i, tidx, Role::G2),
          role_delta_energy(c, mp, i, tidx, Role::D)};
}

double group_hamiltonian(const Configuration& c, const EnergyParams& ep) {
  double H = 0;
  std::vector<double> h = ep.h;
  for (const Edge& e : c.hyper.edges()) {
    double w = c.hyper.weight(e.first, e.second);
    const auto& a = c.agents[static_cast<std::size_t>(e.first)];
    const auto& b = c.agents[static_cast<std::size_t>(e.second)];
    H -= ep.J * w * opinion_dot(a, b);
    if (ep.kappa_edge != 0)
      H += 0.5 * ep.kappa_edge * w * opinion_dist2(a, b);
  }
  if (!h.empty()) {
    for (const auto& a : c.agents)
      for (std::size_t l = 0; l < a.opinion.size() && l < h.size(); ++l)
        H -= h[l] * static_cast<double>(a.opinion[l]);
  }
  if (ep.lambda_tri != 0) {
    for (const Triad& t : c.hyper.triads()) {
      std::size_t m = c.agents[static_cast<std::size_t>(t[0])].opinion.size();
      for (std::size_t l = 0; l < m; ++l) {
        double prod = 1;
        for (int a : t)
          prod *= static_cast<double>(
              c.agents[static_cast<std::size_t>(a)].opinion[l]);
        H -= ep.lambda_tri * prod;
      }
    }
  }
  return H;
}

double group_delta_swap(const Configuration& c, const EnergyParams& ep, int i,
                        int j) {
  if (i == j) return 0;
  const auto& si = c.agents[static_cast<std::size_t>(i)];
  const auto& sj = c.agents[static_cast<std::size_t>(j)];
  double d = 0;
  // Edge terms: edges incident to exactly one of {i, j} change; the (i, j)
  // edge and the field term are symmetric under the swap.
  for (int x : c.hyper.neighbors(i)) {
    if (x == j) continue;
    double w = c.hyper.weight(i, x);
    const auto& sx = c.agents[static_cast<std::size_t>(x)];
    d -= ep.J * w * (opinion_dot(sj, sx) - opinion_dot(si, sx));
    if (ep.kappa_edge != 0)
      d += 0.5 * ep.kappa_edge * w *
           (opinion_dist2(sj, sx) - opinion_dist2(si, sx));
  }
  for (int x : c.hyper.neighbors(j)) {
    if (x == i) continue;
    double w = c.hyper.weight(j, x);
    const auto& sx = c.agents[static_cast<std::size_t>(x)];
    d -= ep.J * w * (opinion_dot(si, sx) - opinion_dot(sj, sx));
    if (ep.kappa_edge != 0)
      d += 0.5 * ep.kappa_edge * w *
           (opinion_dist2(si, sx) - opinion_dist2(sj, sx));
  }
  if (ep.lambda_tri != 0) {
    std::size_t m = si.opinion.size();
    for (std::size_t k : c.hyper.triads_of(i)) {
      const Triad& t = c.hyper.triads()[k];
      bool has_j = std::find(t.begin(), t.end(), j) != t.end();
      if (has_j) continue;  // product is permutation-invariant
      for (std::size_t l = 0; l < m; ++l) {
        double rest = 1;
        for (int a : t)
          if (a != i)
            rest *= static_cast<double>(
                c.agents[static_cast<std::size_t>(a)].opinion[l]);
        d -= ep.lambda_tri * rest *
             (static_cast<double>(sj.opinion[l]) -
              static_cast<double>(si.opinion[l]));
      }
    }
    for (std::size_t k : c.hyper.triads_of(j)) {
      const Triad& t = c.hyper.triads()[k];
      bool has_i = std::find(t.begin(), t.end(), i) != t.end();
      if (has_i) continue;
      for (std::size_t l = 0; l < m; ++l) {
        double rest = 1;
        for (int a : t)
          if (a != j)
            rest *= static_cast<double>(
                c.agents[static_cast<std::size_t>(a)].opinion[l]);
        d -= ep.lambda_tri * rest *
             (static_cast<double>(si.opinion[l]) -
              static_cast<double>(sj.opinion[l]));
      }
    }
  }
  return d;
}

double group_delta_flip(const Configuration& c, const EnergyParams& ep, int i,
                        int l) {
  const auto& si = c.agents[static_cast<std::size_t>(i)];
  double s = static_cast<double>(si.opinion[static_cast<std::size_t>(l)]);
  double d = 0;
  for (int x : c.hyper.neighbors(i)) {
    double w = c.hyper.weight(i, x);
    double sx = static_cast<double>(
        c.agents[static_cast<std::size_t>(x)].opinion[static_cast<std::size_t>(l)]);
    d -= ep.J * w * (-2.0 * s) * sx;
    if (ep.kappa_edge != 0) {
      double before = (s - sx) * (s - sx);
      double after = (-s - sx) * (-s - sx);
      d += 0.5 * ep.kappa_edge * w * (after - before);
    }
  }
  if (!ep.h.empty() && static_cast<std::size_t>(l) < ep.h.size())
    d -= ep.h[static_cast<std::size_t>(l)] * (-2.0 * s);
  if (ep.lambda_tri != 0) {
    for (std::size_t k : c.hyper.triads_of(i)) {
      const Triad& t = c.hyper.triads()[k];
      double rest = 1;
      for (int a : t)
        if (a != i)
          rest *= static_cast<double>(
              c.agents[static_cast<std::size_t>(a)].opinion[static_cast<std::size_t>(l)]);
      d -= ep.lambda_tri * rest * (-2.0 * s);
    }
  }
  return d;
}

double memory_hamiltonian(const Configuration& c, const EnergyParams& ep) {
  double H = 0;
  for (const Edge& e : c.hyper.edges()) {
    double w = c.hyper.weight(e.first, e.second);
    double dm = c.agents[static_cast<std::size_t>(e.first)].memory -
                c.agents[static_cast<std::size_t>(e.second)].memory;
    H += 0.5 * ep.kappaM_stiff * w * dm * dm;
  }
  return H;
}

double phi_align_triad(const Configuration& c, const TriadNeighborhood& nb,
                       std::size_t tidx) {
  double s = 0;
  int cnt = 0;
  for (const auto& e : nb.of[tidx]) {
    if (e.weight == 0) continue;
    const GanBlock& a = c.blocks[tidx].gan;
    const GanBlock& b = c.blocks[e.index].gan;
    s += cosine(a.G1, b.G1) + cosine(a.G2, b.G2);
    ++cnt;
  }
  if (cnt == 0) return 0;
  return s / (2.0 * cnt);
}

double coupling_hamiltonian(const Configuration& c, const EnergyParams& ep) {
  if (c.hyper.triads().empty()) return 0;
  TriadNeighborhood nb = TriadNeighborhood::build(c.hyper);
  double H = 0;
  for (std::size_t k = 0; k < c.hyper.triads().size(); ++k)
    H -= ep.gamma_tau * phi_align_triad(c, nb, k) * c.triad_coherence(k);
  return H;
}

double formation_hamiltonian(const Configuration& c, const ModelParams& mp) {
  double H = 0;
  for (std::size_t k = 0; k < c.hyper.triads().size(); ++k) {
    GanEval ev = gan_objective(c.blocks[k].gan, c.triad_summary(k, mp.p),
                               c.blocks[k].success_filt.value(), mp.energy);
    H += ev.value;
  }
  return H;
}

double total_hamiltonian(const Configuration& c, const ModelParams& mp) {
  return group_hamiltonian(c, mp.energy) + memory_hamiltonian(c, mp.energy) +
         coupling_hamiltonian(c, mp.energy) + formation_hamiltonian(c, mp);
}

GanEval gan_objective(const GanBlock& b, const std::vector<double>& xbar,
                      double m_filtered, const EnergyParams& ep) {
  std::size_t p = b.D.size();
  if (b.G1.size() != p || b.G2.size() != p || xbar.size() != p)
    throw std::invalid_argument("adversarial vector dimensions disagree");
  GanEval ev;
  ev.grad_G1.assign(p, 0.0);
  ev.grad_G2.assign(p, 0.0);
  ev.grad_D.assign(p, 0.0);
  double v = 0;
  for (std::size_t i = 0; i < p; ++i) {
    double r1 = xbar[i] - b.G1[i];
    double r2 = xbar[i] - b.G2[i];
    v += b.D[i] * (r1 + r2) - 0.5 * b.D[i] * b.D[i];
    ev.grad_G1[i] = -b.D[i];
    ev.grad_G2[i] = -b.D[i];
    ev.grad_D[i] = r1 + r2 - b.D[i];
  }
  ev.value = v - ep.lambda_mem * m_filtered;
  return ev;
}

double formation_potential(const Configuration& c, const EnergyParams& ep,
                           std::vector<double>* grad) {
  std::size_t n = c.agents.size();
  if (grad) grad->assign(n, 0.0);
  double V = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double phi = c.agents[i].phi;
    V += ep.a_site * phi * phi;
    if (grad) (*grad)[i] += 2.0 * ep.a_site * phi;
  }
  if (ep.g_tri != 0) {
    for (const Triad& t : c.hyper.triads()) {
      double p0 = c.agents[static_cast<std::size_t>(t[0])].phi;
      double p1 = c.agents[static_cast<std::size_t>(t[1])].phi;
      double p2 = c.agents[static_cast<std::size_t>(t[2])].phi;
      V += ep.g_tri * p0 * p1 * p2;
      if (grad) {
        (*grad)[static_cast<std::size_t>(t[0])] += ep.g_tri * p1 * p2;
        (*grad)[static_cast<std::size_t>(t[1])] += ep.g_tri * p0 * p2;
        (*grad)[static_cast<std::size_t>(t[2])] += ep.g_tri * p0 * p1;
      }
    }
  }
  if (ep.h_pair != 0) {
    for (const Edge& e : c.hyper.edges()) {
      double w = c.hyper.weight(e.first, e.second);
      double pi = c.agents[static_cast<std::size_t>(e.first)].phi;
      double pj = c.agents[static_cast<std::size_t>(e.second)].phi;
      V += ep.h_pair * w * pi * pi * pj * pj;
      if (grad) {
        (*grad)[static_cast<std::size_t>(e.first)] +=
            2.0 * ep.h_pair * w * pi * pj * pj;
        (*grad)[static_cast<std::size_t>(e.second)] +=
            2.0 * ep.h_pair * w * pj * pi * pi;
      }
    }
  }
  return V;
}

TopoEnergy topo_energy(const Configuration& c, const ModelParams& mp,
                       const TriadNeighborhood& nb, std::size_t tidx) {
  TopoEnergy te;
  const EnergyParams& ep = mp.energy;
  const GanBlock& g = c.blocks.at(tidx).gan;
  for (const auto& e : nb.of[tidx]) {
    if (e.weight == 0) continue;
    const GanBlock& gp = c.blocks[e.index].gan;
    te.local -= ep.J_form * (dot(g.G1, gp.G1) + dot(g.G2, gp.G2));
  }
  te.nonlocal = c.blocks[tidx].nonlocal_filt.value();
  std::vector<double> f = triad_mean_field(c);
  std::vector<double> lf = nb.laplacian_apply(f);
  te.curvature = ep.kappa_curv * lf[tidx] * lf[tidx];
  if (ep.lambda_curv != 0) {
    std::vector<double> l2f = nb.laplacian_apply(lf);
    te.curvature += ep.lambda_curv * l2f[tidx] * l2f[tidx];
  }
  return te;
}

double formation_comp_energy(const Configuration& c, const Triad& t) {
  const auto& a = c.agents[static_cast<std::size_t>(t[0])].knowledge;
  const auto& b = c.agents[static_cast<std::size_t>(t[1])].knowledge;
  const auto& d = c.agents[static_cast<std::size_t>(t[2])].knowledge;
  return wasserstein2_sq(a, b) + wasserstein2_sq(a, d) + wasserstein2_sq(b, d);
}

double formation_pattern_weight(const Configuration& c, const Triad& t) {
  return std::exp(-formation_comp_energy(c, t));
}

double formation_energy(const Configuration& c, const ModelParams& mp,
                        const TriadNeighborhood& nb, std::size_t tidx) {
  const Triad& t = c.hyper.triads().at(tidx);
  double e_comp = formation_comp_energy(c, t);
  double e_hist = -mp.energy.gamma_hist * c.blocks[tidx].success_filt.value();
  return e_comp + e_hist + topo_energy(c, mp, nb, tidx).total();
}

double formation_energy_candidate(const Configuration& c,
                                  const ModelParams& mp,
                                  const TriadNeighborhood& nb, const Triad& t) {
  double e = formation_comp_energy(c, t);
  // A candidate has no adversarial vectors or filter channels yet; only the
  // knowledge and curvature terms apply before birth.
  double cand_phi = (c.agents[static_cast<std::size_t>(t[0])].phi +
                     c.agents[static_cast<std::size_t>(t[1])].phi +
                     c.agents[static_cast<std::size_t>(t[2])].phi) /
                    3.0;
  std::vector<double> f = triad_mean_field(c);
  double row = 0;
  int shared = 0;
  for (std::size_t k = 0; k < c.hyper.triads().size(); ++k) {
    const Triad& u = c.hyper.triads()[k];
    int ov = 0;
    for (int x : t)
      if (std::find(u.begin(), u.end(), x) != u.end()) ++ov;
    if (ov == 2) {
      row += cand_phi - f[k];
      ++shared;
    }
  }
  double e_curv = mp.energy.kappa_curv * row * row;
  if (mp.energy.lambda_curv != 0 && shared > 0) {
    std::vector<double> lf = nb.laplacian_apply(f);
    double row2 = 0;
    for (std::size_t k = 0; k < c.hyper.triads().size(); ++k) {
      const Triad& u = c.hyper.triads()[k];
      int ov = 0;
      for (int x : t)
        if (std::find(u.begin(), u.end(), x) != u.end()) ++ov;
      if (ov == 2) row2 += row - lf[k];
    }
    e_curv += mp.energy.lambda_curv * row2 * row2;
  }
  return e + e_curv;
}

double effective_formation_energy(const Configuration& c,
                                  const ModelParams& mp,
                                  const TriadNeighborhood& nb,
                                  std::size_t tidx) {
  const Triad& t = c.hyper.triads().at(tidx);
  double m_direct = (c.agents[static_cast<std::size_t>(t[0])].memory +
                     c.agents[static_cast<std::size_t>(t[1])].memory +
                     c.agents[static_cast<std::size_t>(t[2])].memory) /
                    3.0;
  double m_indirect = 0;
  int cnt = 0;
  for (const auto& e : nb.of[tidx]) {
    if (e.weight == 0) continue;
    const Triad& u = c.hyper.triads()[e.index];
    m_indirect += (c.agents[static_cast<std::size_t>(u[0])].memory +
                   c.agents[static_cast<std::size_t>(u[1])].memory +
                   c.agents[static_cast<std::size_t>(u[2])].memory) /
                  3.0;
    ++cnt;
  }
  if (cnt > 0) m_indirect /= cnt;
  double m_global = 0;
  for (const auto& a : c.agents) m_global += a.memory;
  if (!c.agents.empty()) m_global /= static_cast<double>(c.agents.size());
  return formation_energy(c, mp, nb, tidx) + mp.energy.alpha_mem * m_direct +
         mp.energy.beta_mem * m_indirect + mp.energy.gammaM_mem * m_global;
}

double frustration(const Configuration& c, const ModelParams& mp,
                   std::size_t tidx) {
  const Triad& t = c.hyper.triads().at(tidx);
  double jtau = formation_pattern_weight(c, t);
  double th = c.agents[static_cast<std::size_t>(t[0])].theta +
              c.agents[static_cast<std::size_t>(t[1])].theta +
              c.agents[static_cast<std::size_t>(t[2])].theta;
  return (jtau - std::cos(th)) +
         mp.energy.gamma_mem * c.blocks[tidx].nodemem_filt.value();
}

double validation_energy(const Configuration& c, const ModelParams& mp, int i,
                         int j) {
  if (!c.hyper.has_edge(i, j))
    throw std::invalid_argument("validation requires a 2-section edge");
  Edge e = make_edge(i, j);
  const auto& ai = c.agents[static_cast<std::size_t>(i)];
  const auto& aj = c.agents[static_cast<std::size_t>(j)];
  double de0 = mp.energy.alpha_role * wasserstein2_sq(ai.knowledge, aj.knowledge);
  double mij = 0;
  auto it = c.edge_filt.find(e);
  if (it != c.edge_filt.end()) mij = it->second.value();
  double de_eff = de0 - mp.energy.gamma_mem * mij;
  // Shared-neighborhood consistency from the collective pattern field,
  // realized here by the node formation fields.
  double wsum = 0;
  for (std::size_t k : c.hyper.triads_of(i)) {
    const Triad& t = c.hyper.triads()[k];
    if (std::find(t.begin(), t.end(), j) == t.end()) continue;
    for (int x : t)
      if (x != i && x != j)
        wsum += (ai.phi + aj.phi + c.agents[static_cast<std::size_t>(x)].phi) / 3.0;
  }
  return de_eff + mp.energy.beta_val * wsum;
}

std::map<int, double> validation_transition_probs(const Configuration& c,
                                                  const ModelParams& mp,
                                                  int i) {
  std::map<int, double> out;
  const auto& nbrs = c.hyper.neighbors(i);
  if (nbrs.empty()) return out;
  std::vector<double> e;
  e.reserve(nbrs.size());
  double emin = 0;
  bool first = true;
  for (int j : nbrs) {
    double ev = validation_energy(c, mp, i, j);
    e.push_back(ev);
    if (first || ev < emin) emin = ev;
    first = false;
  }
  double T = c.agents[static_cast<std::size_t>(i)].temperature;
  double z = 0;
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    double w = std::exp(-(e[k] - emin) / T);
    out[nbrs[k]] = w;
    z += w;
  }
  for (auto& kv : out) kv.second /= z;
  return out;
}

}  // namespace trisim
