#pragma once
// All model parameter tables with their documented defaults. Every
// coefficient of the energies and dynamics is settable from the config file
// without recompilation; the structs here are the single source of defaults.

#include <array>
#include <cstdint>
#include <vector>

#include "trisim/kernel.hpp"

namespace trisim {

struct EnergyParams {
  double J = 1.0;              // edge coupling (scaled by edge weight)
  std::vector<double> h;       // external field per opinion component (0)
  double kappa_edge = 0.0;     // quadratic edge penalty on opinion differences
  double lambda_tri = 0.0;     // triadic product coupling
  double kappaM_stiff = 1.0;   // memory stiffness on edges
  double gamma_tau = 0.5;      // alignment-coherence coupling strength
  double alpha_role = 1.0;     // knowledge-compatibility weight
  double beta_role = 1.0;      // opinion-compatibility weight
  double gamma_role = 1.0;     // duplicate-role penalty weight
  double lambda_role = 0.5;    // filtered role-class memory weight
  double a_site = 0.1;         // on-site formation coefficient
  double g_tri = -0.5;         // triad product term in the formation potential
  double h_pair = 0.05;        // pairwise quartic coefficient
  double kappa_curv = 0.1;     // triad-Laplacian curvature weight
  double lambda_curv = 0.0;    // squared-Laplacian curvature weight
  double gamma_hist = 0.5;     // history weight in the formation energy
  double alpha_mem = 0.1;      // direct memory coupling
  double beta_mem = 0.1;       // indirect memory coupling
  double gammaM_mem = 0.1;     // global memory coupling
  double beta_val = 1.0;       // validation sensitivity
  double lambda_mem = 0.1;     // filtered-success weight in the triad objective
  double J_form = 1.0;         // inter-triad generator coupling
  double gamma_mem = 1.0;      // memory modulation (birth/death, frustration,
                               // validation barrier, pattern overlap)
  // Role compatibility matrix: penalty J(r', r) for holding role r' next to a
  // member holding r. Default: indicator of equal roles (duplicate penalty).
  // Row-major 3x3 over (G1, G2, D); empty means the default indicator.
  std::vector<double> role_compat;

  double role_compat_at(int rp, int r) const {
    if (role_compat.size() == 9)
      return role_compat[static_cast<std::size_t>(rp * 3 + r)];
    return rp == r ? 1.0 : 0.0;
  }
};

struct DynParams {
  double dt = 1e-3;
  // Temperature equation.
  double kappa_T = 0.1;      // thermal diffusivity baseline
  double gamma_relax = 1.0;  // relaxation to T_0; also sets D(T) = gamma T
  double T_0 = 1.0;
  double eta_0 = 0.0;        // formation-dissipation feedback amplitude
  double E_a = 1.0;          // activation scale in the feedback coefficient
  double alpha_memT = 0.0;   // memory modulation of the thermal diffusivity
  double sigma_T = 1.0;  // thermal noise scale; 0 makes the T flow deterministic
  double T_min = 1e-3;
  double T_max = 1e3;
  // Formation field.
  double d_phi = 0.1;     // field diffusion coefficient
  double sigma_phi = 0.0;  // noise scale: variance 2 sigma_phi^2 dt
  // Adversarial parameters.
  double sigma_G = 0.0;
  double sigma_D = 0.0;
  double eta_gan = 0.1;  // gradient step scale per unit time
  // Phase dynamics.
  double K_theta = 0.5;
  double omega_0 = 0.0;       // common natural frequency
  double sigma_theta = 0.0;   // phase noise scale
  // Node memory redistribution.
  double kappa_M = 0.1;
  // Jump channel rates (events per unit time, whole system).
  double rate_role = 0.0;
  double rate_exchange = 0.0;
  double rate_birth = 0.0;
  double rate_death = 0.0;
  double rate_flip = 0.0;  // non-conserved auxiliary mode; breaks Q2
  // Optional knowledge drift toward triad barycenters (0 = frozen).
  double kappa_K = 0.0;
};

struct InitParams {
  double phi_0 = 0.0;
  double phi_jitter = 0.0;   // uniform jitter half-width on phi
  double theta_mode = 1.0;   // 1 = uniform [0, 2pi); 0 = all zero
  double M_0 = 0.0;
  double M_jitter = 0.0;     // uniform jitter half-width on node memory
  double reservoir = 0.0;
  int birth_headroom = 0;    // extra reservoir in units of (2 c_G + c_D)
  // Initial triads: explicit list, or a ring of overlapping triads.
  std::vector<std::array<int, 3>> triads;
  bool ring = false;  // {i, i+1, i+2 mod N} for all i
};

struct ModelParams {
  int n_agents = 6;
  int m = 1;        // opinion components
  int p = 4;        // adversarial parameter dimension
  int n_theta = 16; // knowledge grid size
  double c_G = 1.0;
  double c_D = 1.0;  // 0 switches the discriminator to unconstrained mode
  KernelSpec kernel = KernelSpec::standard();
  EnergyParams energy;
  DynParams dyn;
  InitParams init;

  void validate() const;  // throws on out-of-range values
  // Field vector resolved to length m.
  std::vector<double> field() const;
};

}  // namespace trisim
