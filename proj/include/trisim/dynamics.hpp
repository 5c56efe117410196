#pragma once
// Full stochastic evolution by operator splitting: diffusion sub-steps in a
// fixed order (temperature, formation field, phases, adversarial vectors,
// memory field, filter channels), then Poisson-counted jump events (role
// updates, Kawasaki exchanges, triad birth/death, auxiliary flips) with
// targets uniform over eligible sites.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "trisim/agent.hpp"
#include "trisim/params.hpp"
#include "trisim/rng.hpp"

namespace trisim {

struct EventRecord {
  double time = 0;
  std::string kind;    // role | exchange | birth | death | flip
  int agent = -1;      // primary agent, -1 when not agent-scoped
  std::string triad;   // "i-j-k" when triad-scoped, else empty
  std::string detail;
};
using EventLog = std::vector<EventRecord>;

// --- Diffusion sub-steps (synchronous Euler-Maruyama updates) ---------------

// dT_i = [-kappa_i (LT)_i - gamma(T_i - T_0) - eta_f sum w (phi_i - phi_j)^2] dt
//      + sigma_T sqrt(2 gamma T_i dt) xi, clamped to [T_min, T_max], with
// kappa_i memory-modulated and eta_f = eta_0 exp(-E_a / mean T).
void temperature_step(Configuration& c, const ModelParams& mp, Rng& rng,
                      double dt);
// dphi = [-d_phi (L phi) - grad V] dt + sigma_phi sqrt(2 dt) xi.
void phi_step(Configuration& c, const ModelParams& mp, Rng& rng, double dt);
// dtheta = [omega_0 + K_theta sum w sin(theta_j - theta_i)] dt
//        + sigma_theta sqrt(2 T_i dt) xi, wrapped to [0, 2pi).
void theta_step(Configuration& c, const ModelParams& mp, Rng& rng, double dt);
/// Projected adversarial flow: generators descend, discriminator ascends, each
// update tangent-projected and renormalized to its sphere (discriminator
// free-running when its budget is zero).
void gan_step(Configuration& c, const ModelParams& mp, Rng& rng, double dt);
// Conservative node-memory redistribution driven by the filtered triad
// success signals.
void memory_step(Configuration& c, const ModelParams& mp, double dt);
// Optional knowledge relaxation toward triad partners (kappa_K > 0 only).
void knowledge_step(Configuration& c, const ModelParams& mp, double dt);

// --- Jump events -------------------------------------------------------------

// Heat-bath role resample of one incidence.
void role_update(Configuration& c, const ModelParams& mp, int i,
                 std::size_t tidx, Rng& rng);
// Whole-vector opinion swap proposal on an edge; Metropolis acceptance at the
// edge-mean temperature. Returns whether the swap was accepted.
bool kawasaki_exchange(Configuration& c, const ModelParams& mp, int i, int j,
                       Rng& rng);
// Boltzmann birth over inactive candidate 3-subsets; debits the reservoir by
// the full norm budget. Returns false (logged upstream) when the reservoir
// cannot fund a triad or no candidate exists.
bool triad_birth(Configuration& c, const ModelParams& mp, Rng& rng,
                 Triad* born = nullptr);
// Boltzmann death over active triads; credits the norms back. Returns false
// when no triad is active.
bool triad_death(Configuration& c, const ModelParams& mp, Rng& rng,
                 Triad* died = nullptr);
// Auxiliary single-component heat-bath flip (breaks the opinion conservation
// law; off by default). Returns whether the component flipped.
bool opinion_flip(Configuration& c, const ModelParams& mp, int i, int l,
                  Rng& rng);

// --- Composed evolution -------------------------------------------------------

// Advance by round(horizon/dt) steps. The observer (if any) is called on the
// initial state and then every `stride` steps. Events are appended to `log`
// when provided. Fully deterministic for a given seed.
Configuration simulate(Configuration c, const ModelParams& mp, double horizon,
                       std::uint64_t seed, EventLog* log = nullptr,
                       const std::function<void(const Configuration&)>& observer = {},
                       int stride = 1);

}  // namespace trisim
