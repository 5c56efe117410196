#include "trisim/stability.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace trisim {

Eigen::MatrixXd jacobian_fd(
    const std::function<std::vector<double>(const std::vector<double>&)>& f,
    const std::vector<double>& x, double eps) {
  std::vector<double> f0 = f(x);
  Eigen::Index nf = static_cast<Eigen::Index>(f0.size());
  Eigen::Index nx = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd J(nf, nx);
  for (Eigen::Index j = 0; j < nx; ++j) {
    double hj = eps * (1.0 + std::abs(x[static_cast<std::size_t>(j)]));
    std::vector<double> xp = x, xm = x;
    xp[static_cast<std::size_t>(j)] += hj;
    xm[static_cast<std::size_t>(j)] -= hj;
    std::vector<double> fp = f(xp), fm = f(xm);
    if (fp.size() != f0.size() || fm.size() != f0.size())
      throw std::invalid_argument("drift dimension changed under perturbation");
    for (Eigen::Index i = 0; i < nf; ++i) {
      double v = (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) /
                 (2.0 * hj);
      if (!std::isfinite(v))
        throw std::runtime_error("drift returned non-finite values");
      J(i, j) = v;
    }
  }
  return J;
}

RouthHurwitz routh_hurwitz4(double a1, double a2, double a3, double a4) {
  RouthHurwitz r;
  r.margins[0] = a1;
  r.margins[1] = a1 * a2 - a3;
  r.margins[2] = a3 * (a1 * a2 - a3) - a1 * a1 * a4;
  r.margins[3] = a4;
  r.stable = true;
  for (double mgn : r.margins) {
    if (mgn == 0.0) r.boundary = true;
    if (!(mgn > 0.0)) r.stable = false;
  }
  return r;
}

std::vector<LyapunovPoint> lyapunov_check(
    const std::vector<Configuration>& trajectory, const ModelParams& mp,
    double dt_sample) {
  const DynParams& d = mp.dyn;
  bool noisy = d.sigma_phi != 0 || d.sigma_theta != 0 || d.sigma_G != 0 ||
               d.sigma_D != 0 || (d.gamma_relax != 0 && d.sigma_T != 0) ||
               d.rate_role != 0 || d.rate_exchange != 0 || d.rate_birth != 0 ||
               d.rate_death != 0 || d.rate_flip != 0;
  if (noisy)
    throw std::invalid_argument("lyapunov check requires a zero-noise run");
  if (trajectory.size() < 2)
    throw std::invalid_argument("need at least two trajectory samples");

  std::vector<double> V(trajectory.size());
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const Configuration& c = trajectory[k];
    double v = 0;
    for (const Edge& e : c.hyper.edges()) {
      double w = c.hyper.weight(e.first, e.second);
      double dphi = c.agents[static_cast<std::size_t>(e.first)].phi -
                    c.agents[static_cast<std::size_t>(e.second)].phi;
      v += 0.5 * w * dphi * dphi;
    }
    for (std::size_t i = 0; i < c.agents.size(); ++i) {
      double phi = c.agents[i].phi;
      double q = 0;
      for (int j : c.hyper.neighbors(static_cast<int>(i)))
        q += 0.5 * mp.energy.h_pair * c.hyper.weight(static_cast<int>(i), j);
      v += mp.energy.a_site * phi * phi + q * phi * phi * phi * phi;
      v += 0.5 * c.agents[i].temperature * c.agents[i].temperature;
      v += 0.5 * mp.energy.kappaM_stiff * c.agents[i].memory * c.agents[i].memory;
    }
    V[k] = v;
  }

  std::vector<LyapunovPoint> out(trajectory.size());
  for (std::size_t k = 0; k < V.size(); ++k) {
    out[k].t = static_cast<double>(k) * dt_sample;
    out[k].V = V[k];
    if (k == 0)
      out[k].dVdt = (V[1] - V[0]) / dt_sample;
    else if (k + 1 == V.size())
      out[k].dVdt = (V[k] - V[k - 1]) / dt_sample;
    else
      out[k].dVdt = (V[k + 1] - V[k - 1]) / (2.0 * dt_sample);
  }
  return out;
}

MasterStability master_stability(const Eigen::MatrixXd& J,
                                 const Eigen::MatrixXd& C,
                                 const std::vector<double>& alphas) {
  if (J.rows() != J.cols() || C.rows() != J.rows() || C.cols() != J.cols())
    throw std::invalid_argument("J and C must be square and same size");
  MasterStability ms;
  ms.alpha = alphas;
  ms.synchronizes = true;
  for (double a : alphas) {
    Eigen::MatrixXd A = J - a * C;
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    double mx = es.eigenvalues().real().maxCoeff();
    ms.lambda.push_back(mx);
    if (!(mx < 0)) ms.synchronizes = false;
  }
  return ms;
}

MemoryBound memory_operator_bound(const Eigen::MatrixXd& J,
                                  const KernelSpec& kernel, double t,
                                  double gamma_c) {
  if (J.rows() != J.cols())
    throw std::invalid_argument("Jacobian must be square");
  MemoryBound mb;
  double tail = 0;
  for (std::size_t i = 0; i < kernel.a.size(); ++i)
    tail += kernel.a[i] * std::exp(-t / kernel.tau[i]);
  mb.kernel_mass = 1.0 - tail;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  mb.j_norm = J.size() == 0 ? 0.0 : svd.singularValues()(0);
  mb.bound = mb.j_norm * mb.kernel_mass;
  Eigen::MatrixXd M = mb.kernel_mass * J;
  mb.S_mem = M.exp();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd2(mb.S_mem);
  mb.s_norm = svd2.singularValues()(0);
  mb.bound_ok = mb.bound <= gamma_c;
  mb.contracting = mb.s_norm < 1.0;
  return mb;
}

}  // namespace trisim
