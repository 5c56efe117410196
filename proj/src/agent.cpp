#include "trisim/agent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "trisim/energy.hpp"

namespace trisim {

const char* role_name(Role r) {
  switch (r) {
    case Role::G1:
      return "G1";
    case Role::G2:
      return "G2";
    case Role::D:
      return "D";
  }
  throw std::logic_error("bad role value");
}

Role role_from_name(const std::string& s) {
  if (s == "G1") return Role::G1;
  if (s == "G2") return Role::G2;
  if (s == "D") return Role::D;
  throw std::invalid_argument("unknown role name: " + s);
}

void ModelParams::validate() const {
  if (n_agents < 1) throw std::invalid_argument("n_agents must be >= 1");
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (p < 1) throw std::invalid_argument("p must be >= 1");
  if (n_theta < 1) throw std::invalid_argument("n_theta must be >= 1");
  if (c_G <= 0) throw std::invalid_argument("c_G must be positive");
  if (c_D < 0) throw std::invalid_argument("c_D must be nonnegative");
  kernel.validate();
  if (!energy.h.empty() && energy.h.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("field h must have one entry per component");
  if (!energy.role_compat.empty() && energy.role_compat.size() != 9)
    throw std::invalid_argument("role_compat must have 9 entries");
  if (dyn.dt <= 0) throw std::invalid_argument("dt must be positive");
  if (dyn.T_min <= 0) throw std::invalid_argument("T_min must be positive");
  if (dyn.T_max <= dyn.T_min)
    throw std::invalid_argument("T_max must exceed T_min");
  if (dyn.T_0 < dyn.T_min || dyn.T_0 > dyn.T_max)
    throw std::invalid_argument("T_0 must lie in [T_min, T_max]");
  if (dyn.gamma_relax < 0)
    throw std::invalid_argument("gamma_relax must be nonnegative");
  for (double r : {dyn.rate_role, dyn.rate_exchange, dyn.rate_birth,
                   dyn.rate_death, dyn.rate_flip})
    if (r < 0) throw std::invalid_argument("jump rates must be nonnegative");
  if (init.reservoir < 0)
    throw std::invalid_argument("reservoir must be nonnegative");
  if (init.birth_headroom < 0)
    throw std::invalid_argument("birth_headroom must be nonnegative");
  for (const auto& t : init.triads)
    make_triad(t[0], t[1], t[2]);  // throws on duplicates
}

std::vector<double> ModelParams::field() const {
  if (energy.h.empty()) return std::vector<double>(static_cast<std::size_t>(m), 0.0);
  return energy.h;
}

static double sq_norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

double Configuration::q1(bool include_discriminator) const {
  double s = reservoir;
  for (const auto& b : blocks) {
    s += sq_norm(b.gan.G1) + sq_norm(b.gan.G2);
    if (include_discriminator) s += sq_norm(b.gan.D);
  }
  return s;
}

std::vector<long> Configuration::q2() const {
  std::vector<long> tot(static_cast<std::size_t>(m()), 0);
  for (const auto& a : agents)
    for (std::size_t l = 0; l < a.opinion.size(); ++l) tot[l] += a.opinion[l];
  return tot;
}

double Configuration::q3() const {
  double s = 0;
  for (const auto& a : agents) s += a.memory;
  return s;
}

void Configuration::record_baselines() {
  q1_init = q1();
  q2_init = q2();
  q3_init = q3();
}

Role Configuration::role_of(int agent, std::size_t triad_index) const {
  const Triad& t = hyper.triads().at(triad_index);
  return blocks.at(triad_index).roles[static_cast<std::size_t>(member_slot(t, agent))];
}

void Configuration::set_role(int agent, std::size_t triad_index, Role r) {
  const Triad& t = hyper.triads().at(triad_index);
  blocks.at(triad_index).roles[static_cast<std::size_t>(member_slot(t, agent))] = r;
}

int Configuration::member_slot(const Triad& t, int agent) {
  for (int k = 0; k < 3; ++k)
    if (t[static_cast<std::size_t>(k)] == agent) return k;
  throw std::invalid_argument("agent is not a member of the triad");
}

double Configuration::triad_coherence(std::size_t triad_index) const {
  const Triad& t = hyper.triads().at(triad_index);
  double s2 = 0;
  for (int l = 0; l < m(); ++l) {
    double comp = 0;
    for (int a : t)
      comp += agents[static_cast<std::size_t>(a)].opinion[static_cast<std::size_t>(l)];
    comp /= 3.0;
    s2 += comp * comp;
  }
  return std::sqrt(s2);
}

double Configuration::pooled_knowledge_mean(std::size_t triad_index) const {
  const Triad& t = hyper.triads().at(triad_index);
  double s = 0;
  for (int a : t) s += agents[static_cast<std::size_t>(a)].knowledge.mean();
  return s / 3.0;
}

std::vector<double> Configuration::triad_summary(std::size_t triad_index,
                                                 int p) const {
  std::vector<double> x(static_cast<std::size_t>(p), 0.0);
  x[0] = pooled_knowledge_mean(triad_index);
  return x;
}

// Samples a vector uniformly on the sphere of squared norm c in R^p.
static std::vector<double> sphere_sample(Rng& rng, int p, double c) {
  std::vector<double> v(static_cast<std::size_t>(p));
  double n2 = 0;
  do {
    for (auto& x : v) x = rng.normal();
    n2 = sq_norm(v);
  } while (n2 == 0);
  double scale = std::sqrt(c / n2);
  for (auto& x : v) x *= scale;
  return v;
}

TriadBlock fresh_triad_block(const ModelParams& mp, Rng& rng) {
  TriadBlock b;
  b.gan.G1 = sphere_sample(rng, mp.p, mp.c_G);
  b.gan.G2 = sphere_sample(rng, mp.p, mp.c_G);
  if (mp.c_D > 0)
    b.gan.D = sphere_sample(rng, mp.p, mp.c_D);
  else
    b.gan.D.assign(static_cast<std::size_t>(mp.p), 0.0);
  b.success_filt = EmbeddingState::zero(mp.kernel);
  b.nonlocal_filt = EmbeddingState::zero(mp.kernel);
  b.nodemem_filt = EmbeddingState::zero(mp.kernel);
  return b;
}

Role sample_role_heat_bath(const Configuration& c, const ModelParams& mp,
                           int i, std::size_t tidx, Rng& rng) {
  auto de = role_delta_energies(c, mp, i, tidx);
  double T = c.agents[static_cast<std::size_t>(i)].temperature;
  double emin = std::min({de[0], de[1], de[2]});
  std::array<double, 3> w;
  double z = 0;
  for (int r = 0; r < 3; ++r) {
    w[static_cast<std::size_t>(r)] =
        std::exp(-(de[static_cast<std::size_t>(r)] - emin) / T);
    z += w[static_cast<std::size_t>(r)];
  }
  double u = rng.uniform() * z;
  int pick = 0;
  double acc = w[0];
  while (pick < 2 && u >= acc) acc += w[static_cast<std::size_t>(++pick)];
  return static_cast<Role>(pick);
}

Configuration init_configuration(const ModelParams& mp, std::uint64_t seed) {
  mp.validate();
  Rng rng(seed);
  Configuration c;
  c.hyper = TriadicHypergraph(mp.n_agents);

  c.agents.resize(static_cast<std::size_t>(mp.n_agents));
  for (auto& a : c.agents) {
    a.knowledge = KnowledgeState::uniform(mp.n_theta);
    a.opinion.resize(static_cast<std::size_t>(mp.m));
    for (auto& s : a.opinion) s = rng.spin();
    a.temperature = mp.dyn.T_0;
    a.phi = mp.init.phi_0 +
            (mp.init.phi_jitter > 0
                 ? mp.init.phi_jitter * rng.uniform_range(-1.0, 1.0)
                 : 0.0);
    a.theta = mp.init.theta_mode != 0.0
                  ? rng.uniform() * 2.0 * std::acos(-1.0)
                  : 0.0;
    a.memory = mp.init.M_0 +
               (mp.init.M_jitter > 0
                    ? mp.init.M_jitter * rng.uniform_range(-1.0, 1.0)
                    : 0.0);
  }

  std::vector<Triad> initial;
  for (const auto& t : mp.init.triads) initial.push_back(make_triad(t[0], t[1], t[2]));
  if (mp.init.ring && mp.n_agents >= 3) {
    int nring = mp.n_agents == 3 ? 1 : mp.n_agents;
    for (int i = 0; i < nring; ++i) {
      Triad t = make_triad(i, (i + 1) % mp.n_agents, (i + 2) % mp.n_agents);
      if (std::find(initial.begin(), initial.end(), t) == initial.end())
        initial.push_back(t);
    }
  }
  std::sort(initial.begin(), initial.end());
  for (const auto& t : initial) c.hyper.add_triad(t);

  // Blocks parallel to the sorted triad list; adversarial vectors on their
  // spheres so the initial budget is an exact multiple of the per-triad cost.
  for (std::size_t k = 0; k < c.hyper.triads().size(); ++k)
    c.blocks.push_back(fresh_triad_block(mp, rng));

  for (auto& f : c.role_filt) f = EmbeddingState::zero(mp.kernel);
  for (const Edge& e : c.hyper.edges())
    c.edge_filt[e] = EmbeddingState::zero(mp.kernel);
  c.global_filt = EmbeddingState::zero(mp.kernel);

  c.reservoir = mp.init.reservoir +
                mp.init.birth_headroom * (2.0 * mp.c_G + mp.c_D);

  // Heat-bath role draw for every incidence, in deterministic order.
  for (std::size_t k = 0; k < c.hyper.triads().size(); ++k) {
    const Triad& t = c.hyper.triads()[k];
    for (int slot = 0; slot < 3; ++slot) {
      int agent = t[static_cast<std::size_t>(slot)];
      c.blocks[k].roles[static_cast<std::size_t>(slot)] =
          sample_role_heat_bath(c, mp, agent, k, rng);
    }
  }

  c.time = 0.0;
  c.record_baselines();
  return c;
}

std::vector<std::string> validate(const Configuration& c,
                                  const ModelParams& mp) {
  std::vector<std::string> bad;
  auto fail = [&bad](const std::string& s) { bad.push_back(s); };

  if (c.agents.size() != static_cast<std::size_t>(mp.n_agents))
    fail("agent count mismatch");
  for (std::size_t i = 0; i < c.agents.size(); ++i) {
    const auto& a = c.agents[i];
    std::ostringstream who;
    who << "agent " << i;
    if (static_cast<int>(a.knowledge.p.size()) != mp.n_theta)
      fail(who.str() + ": knowledge grid size");
    else if (!a.knowledge.valid())
      fail(who.str() + ": knowledge not a probability vector");
    if (a.opinion.size() != static_cast<std::size_t>(mp.m))
      fail(who.str() + ": opinion length");
    for (auto s : a.opinion)
      if (s != 1 && s != -1) {
        fail(who.str() + ": opinion entry not +1/-1");
        break;
      }
    if (!(a.temperature >= mp.dyn.T_min && a.temperature <= mp.dyn.T_max))
      fail(who.str() + ": temperature out of range");
    if (!(a.theta >= 0.0 && a.theta < 2.0 * std::acos(-1.0) + 1e-12))
      fail(who.str() + ": phase out of range");
    if (!std::isfinite(a.phi) || !std::isfinite(a.memory))
      fail(who.str() + ": non-finite field");
  }

  if (c.blocks.size() != c.hyper.triads().size())
    fail("triad block count mismatch");
  if (!c.hyper.caches_consistent()) fail("hypergraph caches inconsistent");

  std::size_t nk = mp.kernel.a.size();
  for (std::size_t k = 0; k < c.blocks.size(); ++k) {
    const auto& b = c.blocks[k];
    std::ostringstream who;
    who << "triad " << k;
    if (b.gan.G1.size() != static_cast<std::size_t>(mp.p) ||
        b.gan.G2.size() != static_cast<std::size_t>(mp.p) ||
        b.gan.D.size() != static_cast<std::size_t>(mp.p))
      fail(who.str() + ": adversarial dimension");
    if (std::abs(sq_norm(b.gan.G1) - mp.c_G) > 1e-9)
      fail(who.str() + ": C1 norm G1");
    if (std::abs(sq_norm(b.gan.G2) - mp.c_G) > 1e-9)
      fail(who.str() + ": C1 norm G2");
    if (mp.c_D > 0 && std::abs(sq_norm(b.gan.D) - mp.c_D) > 1e-9)
      fail(who.str() + ": C1 norm D");
    if (b.success_filt.m.size() != nk || b.nonlocal_filt.m.size() != nk ||
        b.nodemem_filt.m.size() != nk)
      fail(who.str() + ": filter channel size");
  }

  // Filter channel key set must match the live 2-section exactly.
  {
    std::set<Edge> have;
    for (const auto& kv : c.edge_filt) have.insert(kv.first);
    std::set<Edge> want;
    for (const Edge& e : c.hyper.edges()) want.insert(e);
    if (have != want) fail("edge filter channels out of sync with 2-section");
  }
  for (const auto& f : c.role_filt)
    if (f.m.size() != nk) fail("role filter channel size");
  if (c.global_filt.m.size() != nk) fail("global filter channel size");

  if (c.reservoir < -1e-12) fail("reservoir negative");

  double q1_tol = 1e-9 * (1.0 + std::abs(c.q1_init));
  if (std::abs(c.q1(mp.c_D > 0) - c.q1_init) > q1_tol) fail("Q1 drift");
  if (mp.dyn.rate_flip == 0.0) {
    if (c.q2() != c.q2_init) fail("Q2 drift");
  }
  double q3_tol = 1e-9 * (1.0 + std::abs(c.q3_init));
  if (std::abs(c.q3() - c.q3_init) > q3_tol) fail("Q3 drift");

  return bad;
}

}  // namespace trisim
