#pragma once
// Energy layer: role-assignment energies, group/memory/coupling/formation
// Hamiltonians, the bilinear adversarial triad objective with analytic
// gradients, the formation potential, topology-dependent energies,
// frustration, and validation energies.

#include <array>
#include <cstddef>
#include <map>
#include <vector>

#include "trisim/agent.hpp"
#include "trisim/hypergraph.hpp"
#include "trisim/params.hpp"

namespace trisim {

// --- Role energies ---------------------------------------------------------

// E_local(i, tau): alpha * W2^2(K_i, Bar(K_j, K_k)) + beta * d_H(s_i, Med).
double role_local_energy(const Configuration& c, const ModelParams& mp, int i,
                         std::size_t tidx);

// Delta E_{i,tau}(r') = E_local + gamma * sum_j J(r', r_j) + lambda * Mfilt_r'.
double role_delta_energy(const Configuration& c, const ModelParams& mp, int i,
                         std::size_t tidx, Role rp);
std::array<double, 3> role_delta_energies(const Configuration& c,
                                          const ModelParams& mp, int i,
                                          std::size_t tidx);

// --- Hamiltonian components ------------------------------------------------

double group_hamiltonian(const Configuration& c, const EnergyParams& ep);
// Change of the group Hamiltonian under a full opinion swap s_i <-> s_j.
double group_delta_swap(const Configuration& c, const EnergyParams& ep, int i,
                        int j);
// Change under flipping component l of agent i.
double group_delta_flip(const Configuration& c, const EnergyParams& ep, int i,
                        int l);

double memory_hamiltonian(const Configuration& c, const EnergyParams& ep);

// Cosine alignment of a triad's generator pair against its neighbors,
// averaged per the neighborhood size guard; 0 for isolated triads.
double phi_align_triad(const Configuration& c, const TriadNeighborhood& nb,
                       std::size_t tidx);
double coupling_hamiltonian(const Configuration& c, const EnergyParams& ep);

double formation_hamiltonian(const Configuration& c, const ModelParams& mp);
double total_hamiltonian(const Configuration& c, const ModelParams& mp);

// --- Adversarial triad objective -------------------------------------------

struct GanEval {
  double value = 0;
  std::vector<double> grad_G1, grad_G2, grad_D;
};

// J = sum_m D.(xbar - G_m) - 0.5 ||D||^2 - lambda_mem * m_filtered, with
// gradients d/dG_m = -D and d/dD = sum_m (xbar - G_m) - D.
GanEval gan_objective(const GanBlock& b, const std::vector<double>& xbar,
                      double m_filtered, const EnergyParams& ep);

// --- Formation potential ----------------------------------------------------

// V(phi) = sum_i a_i phi_i^2 + sum_tau g Pi_phi + sum_edges h (phi_i phi_j)^2.
// If grad is non-null it receives dV/dphi.
double formation_potential(const Configuration& c, const EnergyParams& ep,
                           std::vector<double>* grad);

// --- Topology-dependent energies --------------------------------------------

struct TopoEnergy {
  double local = 0;      // generator alignment with neighbor triads
  double nonlocal = 0;   // filtered neighbor-field interaction
  double curvature = 0;  // triad-Laplacian curvature terms
  double total() const { return local + nonlocal + curvature; }
};
TopoEnergy topo_energy(const Configuration& c, const ModelParams& mp,
                       const TriadNeighborhood& nb, std::size_t tidx);

// --- Formation energies ------------------------------------------------------

// E_comp: sum of pairwise W2^2 over the triad members (any 3-subset).
double formation_comp_energy(const Configuration& c, const Triad& t);
// Knowledge-pattern weight J_tau = exp(-E_comp), in (0, 1].
double formation_pattern_weight(const Configuration& c, const Triad& t);

// E_form = E_comp + E_hist + E_topo for an active triad.
double formation_energy(const Configuration& c, const ModelParams& mp,
                        const TriadNeighborhood& nb, std::size_t tidx);
/// Candidate (inactive) 3-subset: knowledge and curvature terms only; history,
// filtered and generator terms require an existing triad and count as 0.
double formation_energy_candidate(const Configuration& c,
                                  const ModelParams& mp,
                                  const TriadNeighborhood& nb, const Triad& t);

// E_form^eff = E_form + alpha_m M_direct + beta_m M_indirect + gammaM M_global.
double effective_formation_energy(const Configuration& c,
                                  const ModelParams& mp,
                                  const TriadNeighborhood& nb,
                                  std::size_t tidx);

// F_tau = [J_tau - cos(theta_i + theta_j + theta_k)] + gamma_mem * Mbar_filt.
double frustration(const Configuration& c, const ModelParams& mp,
                   std::size_t tidx);

// --- Validation --------------------------------------------------------------

// E_val(i,j) = (alpha W2^2 - gamma_mem * filtered pair memory)
//            + beta_val * mean over shared neighbors of the potential mean.
double validation_energy(const Configuration& c, const ModelParams& mp, int i,
                         int j);
// Boltzmann-normalized transition probabilities from i over its neighbors;
// empty map when i has no neighbors (mass stays at i).
std::map<int, double> validation_transition_probs(const Configuration& c,
                                                  const ModelParams& mp,
                                                  int i);

}  // namespace trisim
