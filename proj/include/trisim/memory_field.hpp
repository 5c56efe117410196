#pragma once
// Conservative node-memory field: zero-sum triad forcing, the explicit Euler
// redistribution step with compensated total, role-class averages, and the
// update of every filtered (embedded) memory channel.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "trisim/agent.hpp"
#include "trisim/hypergraph.hpp"
#include "trisim/params.hpp"

namespace trisim {

// Node x triad forcing matrix: column tau has +1/3 on each member and -1/|V|
// on every node, so each column sums to zero.
Eigen::MatrixXd build_zero_sum_forcing(const TriadicHypergraph& h);

// Explicit Euler step of Mdot = -kappa_M L M + B utilde with the total
// preserved by a compensated mean correction. Throws when
// dt * kappa_M * lambda_max(L) >= 2.
void memory_field_step(std::vector<double>& M, const TriadicHypergraph& h,
                       const Eigen::MatrixXd& B,
                       const std::vector<double>& utilde, double kappa_M,
                       double dt);

struct RoleClassMemory {
  std::array<double, 3> value{};   // mean node memory per role class
  std::array<bool, 3> present{};   // false when no incidence holds the role
};
// Incidence-averaged node memory per role over all active triads.
RoleClassMemory role_class_memory(const Configuration& c);

// Advance every filter channel by one step: per-triad success (opinion
// coherence), nonlocal field interaction, member memory; per-role class
// averages; per-edge pair memory; global mean memory.
void update_filters(Configuration& c, const ModelParams& mp, double dt);

}  // namespace trisim
