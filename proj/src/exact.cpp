#include "trisim/exact.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace trisim {

SmallModel SmallModel::triangle(double J, double h, double gamma) {
  SmallModel sm;
  sm.n = 3;
  sm.m = 1;
  sm.J = J;
  sm.h = h;
  sm.gamma = gamma;
  sm.edges = {{make_edge(0, 1), 1.0}, {make_edge(0, 2), 1.0},
              {make_edge(1, 2), 1.0}};
  return sm;
}

SmallModel SmallModel::from_two_section(const TriadicHypergraph& h_, int m,
                                        double J, double h, double gamma) {
  SmallModel sm;
  sm.n = h_.n_agents();
  sm.m = m;
  sm.J = J;
  sm.h = h;
  sm.gamma = gamma;
  for (const Edge& e : h_.edges())
    sm.edges.push_back({e, h_.weight(e.first, e.second)});
  return sm;
}

int SmallModel::spin(std::uint32_t state, int i, int l) const {
  std::uint32_t bit = static_cast<std::uint32_t>(i * m + l);
  return (state >> bit) & 1u ? 1 : -1;
}

double SmallModel::energy(std::uint32_t state) const {
  double E = 0;
  for (const auto& ew : edges) {
    int i = ew.first.first, j = ew.first.second;
    double dotv = 0, kink = 0;
    for (int l = 0; l < m; ++l) {
      double si = spin(state, i, l), sj = spin(state, j, l);
      dotv += si * sj;
      double d = si - sj;
      kink += d * d;
    }
    E += -J * ew.second * dotv + 0.5 * gamma * ew.second * kink;
  }
  if (h != 0) {
    double tot = 0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < m; ++l) tot += spin(state, i, l);
    E -= h * tot;
  }
  return E;
}

static void check_size(const SmallModel& sm) {
  if (sm.bits() > 20)
    throw std::invalid_argument("state space too large for enumeration");
}

GibbsResult enumerate_gibbs(const SmallModel& sm, double T) {
  check_size(sm);
  std::vector<std::uint32_t> states(sm.state_count());
  for (std::size_t s = 0; s < states.size(); ++s)
    states[s] = static_cast<std::uint32_t>(s);
  return enumerate_gibbs(sm, T, states);
}

GibbsResult enumerate_gibbs(const SmallModel& sm, double T,
                            const std::vector<std::uint32_t>& states) {
  if (T <= 0) throw std::invalid_argument("temperature must be positive");
  GibbsResult g;
  g.states = states;
  g.energy.reserve(states.size());
  for (auto s : states) g.energy.push_back(sm.energy(s));
  double emin = *std::min_element(g.energy.begin(), g.energy.end());
  double zs = 0;
  g.p.reserve(states.size());
  for (double e : g.energy) {
    double w = std::exp(-(e - emin) / T);
    g.p.push_back(w);
    zs += w;
  }
  for (auto& p : g.p) p /= zs;
  g.Z = zs * std::exp(-emin / T);
  return g;
}

namespace {

// Whole-vector opinion swap of nodes i and j in the bit encoding.
std::uint32_t swap_state(const SmallModel& sm, std::uint32_t s, int i, int j) {
  std::uint32_t out = s;
  for (int l = 0; l < sm.m; ++l) {
    std::uint32_t bi = static_cast<std::uint32_t>(i * sm.m + l);
    std::uint32_t bj = static_cast<std::uint32_t>(j * sm.m + l);
    std::uint32_t vi = (s >> bi) & 1u, vj = (s >> bj) & 1u;
    out = (out & ~(1u << bi)) | (vj << bi);
    out = (out & ~(1u << bj)) | (vi << bj);
  }
  return out;
}

void solve_stationary(RateModel& rm) {
  Eigen::Index S = rm.K.rows();
  Eigen::MatrixXd A = rm.K.transpose();
  A.row(S - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(S);
  b(S - 1) = 1.0;
  rm.pi = A.fullPivLu().solve(b);
}

void solve_spectrum(RateModel& rm) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(rm.K);
  int zero_modes = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    std::complex<double> lam = es.eigenvalues()(i);
    rm.spectrum.push_back(lam);
    if (lam.real() > -1e-10)
      ++zero_modes;
    else
      rm.relaxation_times.push_back(-1.0 / lam.real());
  }
  std::sort(rm.relaxation_times.begin(), rm.relaxation_times.end(),
            std::greater<double>());
  if (zero_modes > 1) rm.reducible = true;
}

}  // namespace

RateModel build_rate_matrix(const SmallModel& sm, RateRule rule,
                            const std::vector<double>& T_node, double rate,
                            std::uint32_t seed_state) {
  check_size(sm);
  if (static_cast<int>(T_node.size()) != sm.n)
    throw std::invalid_argument("one temperature per node required");
  for (double T : T_node)
    if (T <= 0) throw std::invalid_argument("temperature must be positive");

  RateModel rm;
  if (rule == RateRule::Kawasaki) {
    // Sector of the seed state under whole-vector swaps (breadth-first).
    std::map<std::uint32_t, int> index;
    std::deque<std::uint32_t> queue{seed_state};
    index[seed_state] = 0;
    while (!queue.empty()) {
      std::uint32_t s = queue.front();
      queue.pop_front();
      for (const auto& ew : sm.edges) {
        std::uint32_t y = swap_state(sm, s, ew.first.first, ew.first.second);
        if (y != s && index.emplace(y, static_cast<int>(index.size())).second)
          queue.push_back(y);
      }
    }
    for (const auto& kv : index) rm.states.push_back(kv.first);
    std::sort(rm.states.begin(), rm.states.end());
  } else {
    rm.states.resize(sm.state_count());
    for (std::size_t s = 0; s < rm.states.size(); ++s)
      rm.states[s] = static_cast<std::uint32_t>(s);
  }
  if (rm.states.size() > 4096)
    throw std::invalid_argument("state space too large for a dense generator");

  std::map<std::uint32_t, Eigen::Index> idx;
  for (std::size_t s = 0; s < rm.states.size(); ++s)
    idx[rm.states[s]] = static_cast<Eigen::Index>(s);
  rm.energy.reserve(rm.states.size());
  for (auto s : rm.states) rm.energy.push_back(sm.energy(s));

  Eigen::Index S = static_cast<Eigen::Index>(rm.states.size());
  rm.K = Eigen::MatrixXd::Zero(S, S);

  if (rule == RateRule::Kawasaki) {
    double per_edge = rate / static_cast<double>(sm.edges.size());
    for (Eigen::Index x = 0; x < S; ++x) {
      for (const auto& ew : sm.edges) {
        int i = ew.first.first, j = ew.first.second;
        std::uint32_t y = swap_state(sm, rm.states[static_cast<std::size_t>(x)], i, j);
        if (y == rm.states[static_cast<std::size_t>(x)]) continue;
        Eigen::Index yi = idx.at(y);
        double dE = sm.energy(y) - rm.energy[static_cast<std::size_t>(x)];
        double Tbar = 0.5 * (T_node[static_cast<std::size_t>(i)] +
                             T_node[static_cast<std::size_t>(j)]);
        double acc = dE <= 0 ? 1.0 : std::exp(-dE / Tbar);
        rm.K(x, yi) += per_edge * acc;
      }
    }
  } else {
    double per_flip = rate / static_cast<double>(sm.bits());
    for (Eigen::Index x = 0; x < S; ++x) {
      std::uint32_t sx = rm.states[static_cast<std::size_t>(x)];
      for (std::size_t b = 0; b < sm.bits(); ++b) {
        std::uint32_t y = sx ^ (1u << b);
        Eigen::Index yi = idx.at(y);
        double dE = sm.energy(y) - rm.energy[static_cast<std::size_t>(x)];
        double T = T_node[b / static_cast<std::size_t>(sm.m)];
        double acc;
        if (rule == RateRule::HeatBath)
          acc = 1.0 / (1.0 + std::exp(dE / T));
        else
          acc = dE <= 0 ? 1.0 : std::exp(-dE / T);
        rm.K(x, yi) += per_flip * acc;
      }
    }
  }
  for (Eigen::Index x = 0; x < S; ++x) rm.K(x, x) = -rm.K.row(x).sum() + rm.K(x, x);

  solve_stationary(rm);
  solve_spectrum(rm);
  return rm;
}

BasinDecomposition basin_decomposition(const SmallModel& sm) {
  check_size(sm);
  BasinDecomposition bd;
  std::size_t S = sm.state_count();
  bd.states.resize(S);
  for (std::size_t s = 0; s < S; ++s)
    bd.states[s] = static_cast<std::uint32_t>(s);
  std::vector<double> E(S);
  for (std::size_t s = 0; s < S; ++s) E[s] = sm.energy(bd.states[s]);

  // Deterministic descent map: steepest strictly-decreasing single flip,
  // ties toward the lowest successor encoding; -1 marks a local minimum.
  std::vector<std::int64_t> next(S);
  for (std::size_t s = 0; s < S; ++s) {
    double best = 0;
    std::int64_t pick = -1;
    for (std::size_t b = 0; b < sm.bits(); ++b) {
      std::uint32_t y = static_cast<std::uint32_t>(s) ^ (1u << b);
      double drop = E[s] - E[y];
      if (drop > best || (drop == best && best > 0 && pick >= 0 &&
                          static_cast<std::int64_t>(y) < pick)) {
        best = drop;
        pick = static_cast<std::int64_t>(y);
      }
    }
    next[s] = pick;
  }

  bd.basin_of.assign(S, -1);
  std::map<std::uint32_t, int> attractor_id;
  for (std::size_t s = 0; s < S; ++s) {
    if (bd.basin_of[s] >= 0) continue;
    std::vector<std::size_t> path;
    std::size_t cur = s;
    while (bd.basin_of[cur] < 0 && next[cur] >= 0) {
      path.push_back(cur);
      cur = static_cast<std::size_t>(next[cur]);
    }
    int id;
    if (bd.basin_of[cur] >= 0) {
      id = bd.basin_of[cur];
    } else {
      auto ins = attractor_id.emplace(static_cast<std::uint32_t>(cur),
                                      static_cast<int>(attractor_id.size()));
      id = ins.first->second;
      bd.basin_of[cur] = id;
    }
    for (std::size_t x : path) bd.basin_of[x] = id;
  }

  // Renumber attractors by state encoding.
  std::vector<int> renum(attractor_id.size());
  int k = 0;
  for (const auto& kv : attractor_id) {
    bd.attractors.push_back(kv.first);
    renum[static_cast<std::size_t>(kv.second)] = k++;
  }
  for (auto& b : bd.basin_of) b = renum[static_cast<std::size_t>(b)];

  int A = static_cast<int>(bd.attractors.size());
  bd.basin_sizes.assign(static_cast<std::size_t>(A), 0);
  for (int b : bd.basin_of) ++bd.basin_sizes[static_cast<std::size_t>(b)];

  bd.connectivity = Eigen::MatrixXi::Zero(A, A);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t b = 0; b < sm.bits(); ++b) {
      std::uint32_t y = static_cast<std::uint32_t>(s) ^ (1u << b);
      int ba = bd.basin_of[s], bb = bd.basin_of[y];
      if (ba != bb) {
        bd.connectivity(ba, bb) = 1;
        bd.connectivity(bb, ba) = 1;
      }
    }
  }

  bd.hierarchy = Eigen::MatrixXi::Constant(A, A, -1);
  for (int a = 0; a < A; ++a) {
    std::deque<int> q{a};
    bd.hierarchy(a, a) = 0;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int y = 0; y < A; ++y)
        if (bd.connectivity(x, y) && bd.hierarchy(a, y) < 0) {
          bd.hierarchy(a, y) = bd.hierarchy(a, x) + 1;
          q.push_back(y);
        }
    }
  }
  return bd;
}

double arrhenius_rate(double dF0, double T, double nu0, double memory_term) {
  if (T <= 0) throw std::invalid_argument("temperature must be positive");
  return nu0 * std::exp(-(dF0 - memory_term) / T);
}

}  // namespace trisim
