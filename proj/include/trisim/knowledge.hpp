#pragma once
// Discrete probability distributions on a fixed uniform grid over [0,1],
// exact 1-D Wasserstein-2 distance and two-point barycenters via quantile
// functions, and the componentwise opinion median with tie handling.

#include <cstdint>
#include <vector>

namespace trisim {

struct KnowledgeState {
  std::vector<double> p;  // nonnegative, sums to 1

  std::size_t size() const { return p.size(); }
  static KnowledgeState uniform(std::size_t n);
  static KnowledgeState delta(std::size_t n, std::size_t k);
  // Mean of the distribution under the grid positions.
  double mean() const;
  bool valid(double tol = 1e-12) const;
};

// Grid atom position: x_k = k / n.
double grid_point(std::size_t n, std::size_t k);

// Exact squared Wasserstein-2 distance between same-grid states.
double wasserstein2_sq(const KnowledgeState& a, const KnowledgeState& b);
double wasserstein2(const KnowledgeState& a, const KnowledgeState& b);

// Two-point barycenter: average of quantile functions, re-binned to the grid
// by mass-preserving linear splitting between bracketing atoms.
KnowledgeState barycenter2(const KnowledgeState& a, const KnowledgeState& b);

// Test oracle: W2^2 by direct high-resolution quantile-function integration.
double wasserstein2_sq_quantile_oracle(const KnowledgeState& a,
                                       const KnowledgeState& b,
                                       std::size_t resolution);

// Componentwise two-point median over {-1,+1}; 0 encodes a tie.
std::vector<std::int8_t> median_opinion(const std::vector<std::int8_t>& sj,
                                        const std::vector<std::int8_t>& sk);
// Components disagreeing with the median count 1, ties count 1/2.
double hamming_to_median(const std::vector<std::int8_t>& si,
                         const std::vector<std::int8_t>& med);

}  // namespace trisim
