#include "trisim/memory_field.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace trisim {

Eigen::MatrixXd build_zero_sum_forcing(const TriadicHypergraph& h) {
  int n = h.n_agents();
  std::size_t nt = h.triads().size();
  Eigen::MatrixXd B = Eigen::MatrixXd::Constant(
      n, static_cast<Eigen::Index>(nt), nt == 0 ? 0.0 : -1.0 / n);
  for (std::size_t k = 0; k < nt; ++k)
    for (int a : h.triads()[k])
      B(a, static_cast<Eigen::Index>(k)) += 1.0 / 3.0;
  return B;
}

void memory_field_step(std::vector<double>& M, const TriadicHypergraph& h,
                       const Eigen::MatrixXd& B,
                       const std::vector<double>& utilde, double kappa_M,
                       double dt) {
  int n = h.n_agents();
  if (static_cast<int>(M.size()) != n)
    throw std::invalid_argument("memory vector size mismatch");
  if (B.rows() != n || B.cols() != static_cast<Eigen::Index>(utilde.size()))
    throw std::invalid_argument("forcing matrix shape mismatch");

  if (kappa_M > 0) {
    // Cheap Gershgorin bound first; fall back to the exact top eigenvalue
    // before rejecting the step size.
    double max_deg = 0;
    for (int i = 0; i < n; ++i) {
      double deg = 0;
      for (int j : h.neighbors(i)) deg += h.weight(i, j);
      max_deg = std::max(max_deg, deg);
    }
    if (dt * kappa_M * 2.0 * max_deg >= 2.0) {
      Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
      for (const Edge& e : h.edges()) {
        double w = h.weight(e.first, e.second);
        L(e.first, e.first) += w;
        L(e.second, e.second) += w;
        L(e.first, e.second) -= w;
        L(e.second, e.first) -= w;
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
      double lmax = es.eigenvalues().maxCoeff();
      if (dt * kappa_M * lmax >= 2.0)
        throw std::invalid_argument("memory step size violates stability");
    }
  }

  std::vector<double> dM(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double diff = 0;
    for (int j : h.neighbors(i))
      diff += h.weight(i, j) * (M[static_cast<std::size_t>(i)] -
                                M[static_cast<std::size_t>(j)]);
    double force = 0;
    for (Eigen::Index k = 0; k < B.cols(); ++k)
      force += B(i, k) * utilde[static_cast<std::size_t>(k)];
    dM[static_cast<std::size_t>(i)] = dt * (-kappa_M * diff + force);
  }
  // Compensated sum of the increments; removing the mean keeps the total
  // exactly constant up to one final rounding per node.
  double s = 0, comp = 0;
  for (double x : dM) {
    double y = x - comp;
    double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  double mean = s / n;
  for (int i = 0; i < n; ++i)
    M[static_cast<std::size_t>(i)] += dM[static_cast<std::size_t>(i)] - mean;
}

RoleClassMemory role_class_memory(const Configuration& c) {
  RoleClassMemory out;
  std::array<double, 3> sum{};
  std::array<int, 3> cnt{};
  for (std::size_t k = 0; k < c.hyper.triads().size(); ++k) {
    const Triad& t = c.hyper.triads()[k];
    for (int slot = 0; slot < 3; ++slot) {
      int r = static_cast<int>(c.blocks[k].roles[static_cast<std::size_t>(slot)]);
      sum[static_cast<std::size_t>(r)] +=
          c.agents[static_cast<std::size_t>(t[static_cast<std::size_t>(slot)])].memory;
      cnt[static_cast<std::size_t>(r)] += 1;
    }
  }
  for (int r = 0; r < 3; ++r) {
    if (cnt[static_cast<std::size_t>(r)] > 0) {
      out.value[static_cast<std::size_t>(r)] =
          sum[static_cast<std::size_t>(r)] / cnt[static_cast<std::size_t>(r)];
      out.present[static_cast<std::size_t>(r)] = true;
    }
  }
  return out;
}

void update_filters(Configuration& c, const ModelParams& mp, double dt) {
  const KernelSpec& k = mp.kernel;
  std::size_t nt = c.hyper.triads().size();

  // Triad-mean fields for the nonlocal drive.
  std::vector<double> fbar(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const Triad& tr = c.hyper.triads()[t];
    fbar[t] = (c.agents[static_cast<std::size_t>(tr[0])].phi +
               c.agents[static_cast<std::size_t>(tr[1])].phi +
               c.agents[static_cast<std::size_t>(tr[2])].phi) /
              3.0;
  }
  TriadNeighborhood nb = TriadNeighborhood::build(c.hyper);

  for (std::size_t t = 0; t < nt; ++t) {
    const Triad& tr = c.hyper.triads()[t];
    embed_step(c.blocks[t].success_filt, k, c.triad_coherence(t), dt);
    double drive = 0;
    for (const auto& e : nb.of[t])
      if (e.weight != 0) drive += e.weight * fbar[t] * fbar[e.index];
    embed_step(c.blocks[t].nonlocal_filt, k, drive, dt);
    double mbar = (c.agents[static_cast<std::size_t>(tr[0])].memory +
                   c.agents[static_cast<std::size_t>(tr[1])].memory +
                   c.agents[static_cast<std::size_t>(tr[2])].memory) /
                  3.0;
    embed_step(c.blocks[t].nodemem_filt, k, mbar, dt);
  }

  RoleClassMemory rc = role_class_memory(c);
  for (int r = 0; r < 3; ++r)
    embed_step(c.role_filt[static_cast<std::size_t>(r)], k,
               rc.present[static_cast<std::size_t>(r)]
                   ? rc.value[static_cast<std::size_t>(r)]
                   : 0.0,
               dt);

  for (auto& kv : c.edge_filt) {
    double mij = 0.5 * (c.agents[static_cast<std::size_t>(kv.first.first)].memory +
                        c.agents[static_cast<std::size_t>(kv.first.second)].memory);
    embed_step(kv.second, k, mij, dt);
  }

  double mg = 0;
  for (const auto& a : c.agents) mg += a.memory;
  if (!c.agents.empty()) mg /= static_cast<double>(c.agents.size());
  embed_step(c.global_filt, k, mg, dt);
}

}  // namespace trisim
