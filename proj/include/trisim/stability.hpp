#pragma once
// Numerical stability toolkit: finite-difference Jacobians, Routh-Hurwitz
// margins for quartic characteristic polynomials, Lyapunov descent checks
// along deterministic trajectories, the master stability function, and
// memory-operator norm bounds.

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "trisim/agent.hpp"
#include "trisim/kernel.hpp"
#include "trisim/params.hpp"

namespace trisim {

// Central finite-difference Jacobian of a drift map, step eps*(1+|x_j|).
Eigen::MatrixXd jacobian_fd(
    const std::function<std::vector<double>(const std::vector<double>&)>& f,
    const std::vector<double>& x, double eps = 1e-5);

struct RouthHurwitz {
  std::array<double, 4> margins{};  // a1, a1 a2 - a3, a3(a1 a2 - a3) - a1^2 a4, a4
  bool stable = false;              // all margins > 0
  bool boundary = false;            // some margin exactly 0
};
// Stability conditions for lambda^4 + a1 lambda^3 + a2 lambda^2 + a3 lambda + a4.
RouthHurwitz routh_hurwitz4(double a1, double a2, double a3, double a4);

struct LyapunovPoint {
  double t = 0;
  double V = 0;
  double dVdt = 0;
};
// V = 1/2 sum_edges w (phi_i - phi_j)^2 + sum_i F(phi_i) + 1/2 sum T^2
//   + (kappa_M_stiff/2) sum M^2, with on-site F(phi) = a phi^2 + q phi^4 and
// q_i = 1/2 sum_j h_ij. dV/dt by central differences; refuses noisy settings.
std::vector<LyapunovPoint> lyapunov_check(
    const std::vector<Configuration>& trajectory, const ModelParams& mp,
    double dt_sample);

struct MasterStability {
  std::vector<double> alpha;
  std::vector<double> lambda;  // max Re eig(J - alpha C)
  bool synchronizes = false;   // all lambda < 0
};
// Master stability function over the provided Laplacian eigenvalues.
MasterStability master_stability(const Eigen::MatrixXd& J,
                                 const Eigen::MatrixXd& C,
                                 const std::vector<double>& alphas);

struct MemoryBound {
  double kernel_mass = 0;   // int_0^t K
  double j_norm = 0;        // spectral norm of J
  double bound = 0;         // ||M|| <= ||J||_2 * int K
  double s_norm = 0;        // spectral norm of S_mem = exp(int K * J)
  Eigen::MatrixXd S_mem;
  bool bound_ok = false;    // bound <= gamma_c
  bool contracting = false; // ||S_mem|| < 1
};
// Frozen-coefficient memory-operator bound over horizon t.
MemoryBound memory_operator_bound(const Eigen::MatrixXd& J,
                                  const KernelSpec& kernel, double t,
                                  double gamma_c);

}  // namespace trisim
