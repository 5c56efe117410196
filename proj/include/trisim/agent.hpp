#pragma once
// Per-agent state, triad-incidence roles, adversarial parameter blocks, and
// the full system configuration with its three conserved quantities:
//   Q1 = reservoir + sum of adversarial norm budgets,
//   Q2 = total opinion vector (exact integers),
//   Q3 = total node memory.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trisim/hypergraph.hpp"
#include "trisim/kernel.hpp"
#include "trisim/knowledge.hpp"
#include "trisim/params.hpp"
#include "trisim/rng.hpp"

namespace trisim {

enum class Role : int { G1 = 0, G2 = 1, D = 2 };

const char* role_name(Role r);
Role role_from_name(const std::string& s);

struct AgentState {
  KnowledgeState knowledge;
  std::vector<std::int8_t> opinion;  // entries exactly +1/-1
  double temperature = 1.0;
  double phi = 0.0;
  double theta = 0.0;  // in [0, 2pi)
  double memory = 0.0;
};

struct GanBlock {
  std::vector<double> G1, G2, D;
};

// Everything owned per active triad, kept parallel to the hypergraph's
// sorted triad list.
struct TriadBlock {
  std::array<Role, 3> roles{Role::G1, Role::G2, Role::D};  // by sorted member
  GanBlock gan;
  EmbeddingState success_filt;   // filtered triad coherence (triad memory)
  EmbeddingState nonlocal_filt;  // filtered neighbor-field interaction
  EmbeddingState nodemem_filt;   // filtered mean member memory
};

struct Configuration {
  std::vector<AgentState> agents;
  TriadicHypergraph hyper;
  std::vector<TriadBlock> blocks;  // parallel to hyper.triads()
  double reservoir = 0.0;
  // Filtered role-class memory, one channel per role.
  std::array<EmbeddingState, 3> role_filt;
  // Filtered pair memory per 2-section edge (validation channels).
  std::map<Edge, EmbeddingState> edge_filt;
  // Filtered global mean memory.
  EmbeddingState global_filt;
  double time = 0.0;

  // Conserved-quantity baselines recorded at initialization.
  double q1_init = 0.0;
  std::vector<long> q2_init;
  double q3_init = 0.0;

  int n() const { return hyper.n_agents(); }
  int m() const {
    return agents.empty() ? 0 : static_cast<int>(agents[0].opinion.size());
  }

  double q1() const { return q1(true); }
  // In unconstrained-discriminator mode the D vectors carry no budget and are
  // excluded from the accounting.
  double q1(bool include_discriminator) const;
  std::vector<long> q2() const;
  double q3() const;
  void record_baselines();

  Role role_of(int agent, std::size_t triad_index) const;
  void set_role(int agent, std::size_t triad_index, Role r);
  // Position (0..2) of an agent inside a sorted triad; throws if absent.
  static int member_slot(const Triad& t, int agent);

  // Triad coherence m_tau = ||(1/3) sum of member opinions||_2.
  double triad_coherence(std::size_t triad_index) const;
  // Mean of the members' knowledge-state means.
  double pooled_knowledge_mean(std::size_t triad_index) const;
  // Pooled mean embedded in R^p (coordinate 0).
  std::vector<double> triad_summary(std::size_t triad_index, int p) const;
};

// New triad block with adversarial vectors sampled uniformly on their
// spheres and all filter channels at zero.
TriadBlock fresh_triad_block(const ModelParams& mp, Rng& rng);

// Heat-bath role draw for one incidence: r' with probability proportional to
// exp(-DeltaE_{i,tau}(r')/T_i).
Role sample_role_heat_bath(const Configuration& c, const ModelParams& mp,
                           int i, std::size_t tidx, Rng& rng);

// Fresh configuration: uniform knowledge, i.i.d. opinions, T = T_0, phi and
// memory per init table, theta uniform, adversarial vectors on their spheres,
// roles drawn heat-bath per incidence, baselines recorded.
Configuration init_configuration(const ModelParams& mp, std::uint64_t seed);

// Invariant check; returns human-readable violations (empty = valid).
// Q2 is checked only when the non-conserved flip channel is off.
std::vector<std::string> validate(const Configuration& c,
                                  const ModelParams& mp);

}  // namespace trisim
