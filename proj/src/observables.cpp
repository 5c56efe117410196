#include "trisim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <stdexcept>

#include "trisim/energy.hpp"

namespace trisim {

namespace {

double entropy_nats(const std::vector<long>& counts, long total) {
  if (total <= 0) return 0;
  double h = 0;
  for (long c : counts) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

// Opinion pattern of agent i as an index into {0..2^m-1} (bit l set = +1).
unsigned pattern_index(const AgentState& a) {
  unsigned idx = 0;
  for (std::size_t l = 0; l < a.opinion.size(); ++l)
    if (a.opinion[l] > 0) idx |= 1u << l;
  return idx;
}

double coherence_of(const Configuration& c) {
  const auto edges = c.hyper.edges();
  if (edges.empty()) return 0;
  double sum = 0;
  for (const Edge& e : edges) {
    const auto& si = c.agents[static_cast<std::size_t>(e.first)].opinion;
    const auto& sj = c.agents[static_cast<std::size_t>(e.second)].opinion;
    double d = 0;
    for (std::size_t l = 0; l < si.size(); ++l)
      d += static_cast<double>(si[l]) * static_cast<double>(sj[l]);
    sum += d / static_cast<double>(si.size());
  }
  return sum / static_cast<double>(edges.size());
}

// Radix-2 iterative FFT; n must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = -2.0 * M_PI / static_cast<double>(len);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::vector<std::complex<double>> discrete_transform(
    const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<std::complex<double>> out(n);
  if ((n & (n - 1)) == 0) {
    for (std::size_t t = 0; t < n; ++t) out[t] = y[t];
    fft_pow2(out);
    return out;
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0, 0);
    for (std::size_t t = 0; t < n; ++t) {
      double ang = -2.0 * M_PI * static_cast<double>(k) *
                   static_cast<double>(t) / static_cast<double>(n);
      acc += y[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

RoleReference role_snapshot(const Configuration& c) {
  RoleReference ref;
  const auto& triads = c.hyper.triads();
  for (std::size_t k = 0; k < triads.size(); ++k)
    ref[triads[k]] = c.blocks[k].roles;
  return ref;
}

OrderParameters order_parameters(const Configuration& c,
                                 const RoleReference* ref) {
  OrderParameters op;
  const int n = c.n();
  const auto& triads = c.hyper.triads();

  if (!triads.empty()) {
    double pf = 0;
    for (const Triad& t : triads)
      pf += c.agents[static_cast<std::size_t>(t[0])].phi *
            c.agents[static_cast<std::size_t>(t[1])].phi *
            c.agents[static_cast<std::size_t>(t[2])].phi;
    op.psi_form = pf / static_cast<double>(triads.size());

    TriadNeighborhood nb = TriadNeighborhood::build(c.hyper);
    double al = 0;
    for (std::size_t k = 0; k < triads.size(); ++k)
      al += phi_align_triad(c, nb, k);
    op.phi_align = al / static_cast<double>(triads.size());
  }

  op.coherence = coherence_of(c);

  double mbar = 0;
  for (const auto& a : c.agents) mbar += a.memory;
  mbar /= n;
  double v = 0;
  for (const auto& a : c.agents) v += (a.memory - mbar) * (a.memory - mbar);
  op.psi_mem = v / n;

  op.phi_role = 1.0;
  if (ref) {
    long match = 0, total = 0;
    for (std::size_t k = 0; k < triads.size(); ++k) {
      auto it = ref->find(triads[k]);
      if (it == ref->end()) continue;
      for (int s = 0; s < 3; ++s) {
        ++total;
        if (c.blocks[k].roles[static_cast<std::size_t>(s)] ==
            it->second[static_cast<std::size_t>(s)])
          ++match;
      }
    }
    if (total > 0)
      op.phi_role = static_cast<double>(match) / static_cast<double>(total);
  }

  double re = 0, im = 0;
  for (const auto& a : c.agents) {
    re += std::cos(a.theta);
    im += std::sin(a.theta);
  }
  op.phi_sync = std::sqrt(re * re + im * im) / n;
  return op;
}

double susceptibility(const std::vector<double>& series, int n_agents,
                      double temperature) {
  if (series.size() < 2)
    throw std::invalid_argument("susceptibility needs at least two samples");
  if (temperature <= 0)
    throw std::invalid_argument("susceptibility needs T > 0");
  double mean = 0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(series.size());
  double var = 0;
  for (double x : series) var += (x - mean) * (x - mean);
  var /= static_cast<double>(series.size());
  return var / (static_cast<double>(n_agents) * temperature);
}

CorrelationReport correlation_functions(
    const std::vector<Configuration>& ensemble) {
  if (ensemble.size() < 2)
    throw std::invalid_argument(
        "connected correlations need at least two snapshots");
  const int n = ensemble.front().n();
  const std::size_t m = ensemble.front().agents[0].opinion.size();
  for (const auto& c : ensemble)
    if (c.n() != n)
      throw std::invalid_argument("ensemble mixes agent counts");

  const double ns = static_cast<double>(ensemble.size());
  // <s_i> per component and <s_i . s_j> pair means.
  Eigen::MatrixXd smean = Eigen::MatrixXd::Zero(n, static_cast<int>(m));
  Eigen::MatrixXd dot = Eigen::MatrixXd::Zero(n, n);
  for (const auto& c : ensemble) {
    Eigen::MatrixXd s(n, static_cast<int>(m));
    for (int i = 0; i < n; ++i)
      for (std::size_t l = 0; l < m; ++l)
        s(i, static_cast<int>(l)) =
            static_cast<double>(c.agents[static_cast<std::size_t>(i)].opinion[l]);
    smean += s;
    dot += s * s.transpose();
  }
  smean /= ns;
  dot /= ns;

  CorrelationReport rep;
  rep.c_local = dot - smean * smean.transpose();
  rep.c_global = rep.c_local.mean();

  // Hop distances on the last snapshot's 2-section.
  const TriadicHypergraph& h = ensemble.back().hyper;
  int dmax = 0;
  std::vector<std::vector<int>> dist(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& di = dist[static_cast<std::size_t>(i)];
    di.assign(static_cast<std::size_t>(n), -1);
    di[static_cast<std::size_t>(i)] = 0;
    std::deque<int> q{i};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : h.neighbors(u))
        if (di[static_cast<std::size_t>(v)] < 0) {
          di[static_cast<std::size_t>(v)] = di[static_cast<std::size_t>(u)] + 1;
          dmax = std::max(dmax, di[static_cast<std::size_t>(v)]);
          q.push_back(v);
        }
    }
  }
  rep.g.assign(static_cast<std::size_t>(dmax), 0.0);
  rep.pair_counts.assign(static_cast<std::size_t>(dmax), 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int d = dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (d <= 0) continue;
      rep.g[static_cast<std::size_t>(d - 1)] += rep.c_local(i, j);
      rep.pair_counts[static_cast<std::size_t>(d - 1)] += 1;
    }
  for (std::size_t k = 0; k < rep.g.size(); ++k)
    if (rep.pair_counts[k] > 0)
      rep.g[k] /= static_cast<double>(rep.pair_counts[k]);
  return rep;
}

PatternBank random_pattern_bank(int n_agents, int m, int count, Rng& rng) {
  PatternBank bank;
  bank.n_agents = n_agents;
  bank.m = m;
  bank.patterns.resize(static_cast<std::size_t>(count));
  for (auto& p : bank.patterns) {
    p.resize(static_cast<std::size_t>(n_agents) * static_cast<std::size_t>(m));
    for (auto& x : p) x = rng.bernoulli(0.5) ? 1 : -1;
  }
  return bank;
}

PatternOverlap pattern_overlap(const Configuration& c, const PatternBank& bank,
                               double gamma) {
  if (bank.patterns.empty())
    throw std::invalid_argument("pattern bank is empty");
  const std::size_t n = c.agents.size();
  const std::size_t m = c.agents[0].opinion.size();
  if (bank.n_agents != static_cast<int>(n) || bank.m != static_cast<int>(m))
    throw std::invalid_argument("pattern bank shape mismatch");

  std::vector<double> s(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < m; ++l)
      s[i * m + l] = static_cast<double>(c.agents[i].opinion[l]);
  double snorm = 0;
  for (double x : s) snorm += x * x;
  snorm = std::sqrt(snorm);
  if (snorm == 0) throw std::invalid_argument("zero-norm opinion state");

  const double factor = 1.0 + gamma * c.global_filt.value();
  PatternOverlap out;
  for (const auto& w : bank.patterns) {
    double d = 0, wnorm = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      d += static_cast<double>(w[k]) * s[k];
      wnorm += static_cast<double>(w[k]) * static_cast<double>(w[k]);
    }
    double raw = d / (std::sqrt(wnorm) * snorm);
    out.raw.push_back(raw);
    out.modulated.push_back(raw * factor);
  }
  return out;
}

double mutual_information(const std::vector<double>& x,
                          const std::vector<double>& y, int bins) {
  if (x.size() != y.size())
    throw std::invalid_argument("mutual information needs equal lengths");
  if (x.size() < 100)
    throw std::invalid_argument("mutual information needs >= 100 samples");
  if (bins < 1) throw std::invalid_argument("bins must be positive");

  auto bin_of = [bins](double v, double lo, double hi) {
    if (hi <= lo) return 0;
    int b = static_cast<int>(static_cast<double>(bins) * (v - lo) / (hi - lo));
    return std::clamp(b, 0, bins - 1);
  };
  double xlo = *std::min_element(x.begin(), x.end());
  double xhi = *std::max_element(x.begin(), x.end());
  double ylo = *std::min_element(y.begin(), y.end());
  double yhi = *std::max_element(y.begin(), y.end());

  std::vector<long> joint(static_cast<std::size_t>(bins) *
                              static_cast<std::size_t>(bins),
                          0);
  std::vector<long> px(static_cast<std::size_t>(bins), 0);
  std::vector<long> py(static_cast<std::size_t>(bins), 0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    int bx = bin_of(x[k], xlo, xhi);
    int by = bin_of(y[k], ylo, yhi);
    joint[static_cast<std::size_t>(bx) * static_cast<std::size_t>(bins) +
          static_cast<std::size_t>(by)] += 1;
    px[static_cast<std::size_t>(bx)] += 1;
    py[static_cast<std::size_t>(by)] += 1;
  }
  const double nt = static_cast<double>(x.size());
  double mi = 0;
  for (int bx = 0; bx < bins; ++bx)
    for (int by = 0; by < bins; ++by) {
      long cj = joint[static_cast<std::size_t>(bx) *
                          static_cast<std::size_t>(bins) +
                      static_cast<std::size_t>(by)];
      if (cj == 0) continue;
      double pj = cj / nt;
      mi += pj * std::log(pj * nt * nt /
                          (static_cast<double>(px[static_cast<std::size_t>(bx)]) *
                           static_cast<double>(py[static_cast<std::size_t>(by)])));
    }
  return std::max(0.0, mi);
}

SpectralDensity spectral_capacity(const std::vector<double>& series,
                                  double dt) {
  if (series.size() < 2)
    throw std::invalid_argument("spectral density needs at least two samples");
  if (dt <= 0) throw std::invalid_argument("dt must be positive");
  const std::size_t n = series.size();
  double mean = 0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(n);
  std::vector<double> y(n);
  for (std::size_t t = 0; t < n; ++t) y[t] = series[t] - mean;

  auto Y = discrete_transform(y);
  // Two-sided density |Y_k|^2 dt / n folded onto 0..Nyquist so that
  // sum(value) * df reproduces the series variance exactly.
  SpectralDensity sd;
  sd.df = 1.0 / (static_cast<double>(n) * dt);
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k <= half; ++k) {
    double p = std::norm(Y[k]) * dt / static_cast<double>(n);
    bool has_mirror = k > 0 && (n % 2 == 1 || k < half);
    if (has_mirror) p += std::norm(Y[n - k]) * dt / static_cast<double>(n);
    sd.freq.push_back(static_cast<double>(k) * sd.df);
    sd.value.push_back(p);
  }
  return sd;
}

HierarchicalEntropy hierarchical_entropy(
    const std::vector<Configuration>& window, int bins) {
  if (window.empty())
    throw std::invalid_argument("hierarchical entropy needs a nonempty window");
  if (bins < 1) throw std::invalid_argument("bins must be positive");
  const int n = window.front().n();
  const int m = window.front().m();
  if (m > 3)
    throw std::invalid_argument(
        "hierarchical entropy supports m <= 3 (joint triad alphabet 2^{3m}); "
        "reduce m or compute per-component entropies externally");
  const long ns = static_cast<long>(window.size());

  HierarchicalEntropy he;

  // S_local: per-agent opinion-pattern entropy across the window.
  double sl = 0;
  for (int i = 0; i < n; ++i) {
    std::vector<long> counts(1u << m, 0);
    for (const auto& c : window)
      counts[pattern_index(c.agents[static_cast<std::size_t>(i)])] += 1;
    sl += entropy_nats(counts, ns);
  }
  he.mean_s_local = sl / n;

  // S_meso: joint member-pattern entropy for the first snapshot's triads.
  const auto& triads = window.front().hyper.triads();
  if (!triads.empty()) {
    double sm = 0;
    for (const Triad& t : triads) {
      std::vector<long> counts(1u << (3 * m), 0);
      for (const auto& c : window) {
        unsigned idx = 0;
        for (int s = 0; s < 3; ++s)
          idx |= pattern_index(
                     c.agents[static_cast<std::size_t>(t[static_cast<std::size_t>(s)])])
                 << (static_cast<unsigned>(m) * static_cast<unsigned>(s));
        counts[idx] += 1;
      }
      sm += entropy_nats(counts, ns);
    }
    he.mean_s_meso = sm / static_cast<double>(triads.size());
  }

  // S_global: binned entropy of the group-coherence series on [-1, 1].
  std::vector<long> counts(static_cast<std::size_t>(bins), 0);
  for (const auto& c : window) {
    double v = coherence_of(c);
    int b = static_cast<int>((v + 1.0) / 2.0 * static_cast<double>(bins));
    counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))] += 1;
  }
  he.s_global = entropy_nats(counts, ns);

  he.value = he.s_global - he.mean_s_local - he.mean_s_meso;
  return he;
}

EntropyProduction entropy_production_jump(const Eigen::MatrixXd& K,
                                          const Eigen::VectorXd& pi) {
  if (K.rows() != K.cols() || K.rows() != pi.size())
    throw std::invalid_argument("rate matrix / distribution size mismatch");
  EntropyProduction out;
  for (Eigen::Index a = 0; a < K.rows(); ++a)
    for (Eigen::Index b = 0; b < K.cols(); ++b) {
      if (a == b || K(a, b) <= 0 || pi(a) <= 0) continue;
      double fwd = pi(a) * K(a, b);
      double bwd = pi(b) * K(b, a);
      if (bwd <= 0) {
        out.infinite = true;
        continue;
      }
      out.value += fwd * std::log(fwd / bwd);
    }
  if (out.value < 0 && out.value > -1e-15) out.value = 0;
  return out;
}

ScaleProjection scale_projections(const Configuration& c, double length) {
  if (length < 0) throw std::invalid_argument("smoothing length must be >= 0");
  ScaleProjection sp;
  const int n = c.n();
  sp.micro.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    sp.micro[static_cast<std::size_t>(i)] =
        c.agents[static_cast<std::size_t>(i)].phi;

  const auto& triads = c.hyper.triads();
  sp.meso.resize(triads.size());
  for (std::size_t k = 0; k < triads.size(); ++k) {
    const Triad& t = triads[k];
    sp.meso[k] = (sp.micro[static_cast<std::size_t>(t[0])] +
                  sp.micro[static_cast<std::size_t>(t[1])] +
                  sp.micro[static_cast<std::size_t>(t[2])]) /
                 3.0;
  }

  sp.macro = c.hyper.heat_kernel_smooth(sp.micro, length);

  sp.meso_node_view.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto incident = c.hyper.triads_of(i);
    if (incident.empty()) continue;
    double s = 0;
    for (std::size_t k : incident) s += sp.meso[k];
    sp.meso_node_view[static_cast<std::size_t>(i)] =
        s / static_cast<double>(incident.size());
  }
  return sp;
}

JmixEstimate jmix_estimate(const std::vector<double>& times,
                           const std::vector<double>& phi_align,
                           const std::vector<double>& coherence) {
  const std::size_t n = times.size();
  if (phi_align.size() != n || coherence.size() != n)
    throw std::invalid_argument("series length mismatch");
  if (n < 4)
    throw std::invalid_argument("mixed-mode fit needs at least four samples");

  double m0 = 0, m1 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    m0 += phi_align[k];
    m1 += coherence[k];
  }
  m0 /= static_cast<double>(n);
  m1 /= static_cast<double>(n);

  const std::size_t rows = n - 1;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows), 2);
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(rows), 2);
  for (std::size_t k = 0; k < rows; ++k) {
    double dtk = times[k + 1] - times[k];
    if (dtk <= 0) throw std::invalid_argument("times must be increasing");
    X(static_cast<Eigen::Index>(k), 0) = phi_align[k] - m0;
    X(static_cast<Eigen::Index>(k), 1) = coherence[k] - m1;
    Y(static_cast<Eigen::Index>(k), 0) = (phi_align[k + 1] - phi_align[k]) / dtk;
    Y(static_cast<Eigen::Index>(k), 1) = (coherence[k + 1] - coherence[k]) / dtk;
  }

  Eigen::Matrix2d xtx = (X.transpose() * X);
  Eigen::Matrix2d xtx_inv = xtx.inverse();
  Eigen::MatrixXd coef = xtx_inv * X.transpose() * Y;  // 2x2, column per target

  JmixEstimate est;
  est.J = coef.transpose();  // row i: d(target_i)/d(state_j)
  for (int tgt = 0; tgt < 2; ++tgt) {
    Eigen::VectorXd resid = Y.col(tgt) - X * coef.col(tgt);
    double dof = static_cast<double>(rows) - 2.0;
    double s2 = resid.squaredNorm() / std::max(dof, 1.0);
    for (int j = 0; j < 2; ++j)
      est.std_err(tgt, j) = std::sqrt(s2 * xtx_inv(j, j));
  }
  return est;
}

}  // namespace trisim
