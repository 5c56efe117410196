#pragma once
// Exact-enumeration oracle for small discrete instances: Gibbs distributions,
// continuous-time rate matrices with their stationary distributions and
// spectra, zero-temperature basin decompositions, and transition-state rates.
// The energy here is an independent reimplementation on bit-encoded states —
// deliberately not sharing code with the Hamiltonians used by the engine.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "trisim/hypergraph.hpp"

namespace trisim {

// Small spin system on a weighted graph: m-component +/-1 spins on n nodes,
// E = -J sum_edges w s_i.s_j - h sum s + (gamma/2) sum_edges w |s_i - s_j|^2.
// States are bit-encoded: bit (i*m + l) set means s_{i,l} = +1.
struct SmallModel {
  int n = 3;
  int m = 1;
  double J = 1.0;
  double h = 0.0;
  double gamma = 0.0;
  std::vector<std::pair<Edge, double>> edges;  // weighted graph

  static SmallModel triangle(double J, double h = 0.0, double gamma = 0.0);
  // Graph taken from the 2-section of a hypergraph.
  static SmallModel from_two_section(const TriadicHypergraph& h_, int m,
                                     double J, double h, double gamma);

  std::size_t bits() const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
  }
  std::size_t state_count() const { return std::size_t{1} << bits(); }
  int spin(std::uint32_t state, int i, int l) const;
  double energy(std::uint32_t state) const;
};

struct GibbsResult {
  double Z = 0;
  std::vector<std::uint32_t> states;
  std::vector<double> energy;
  std::vector<double> p;
};

// Exact partition function and Boltzmann probabilities at uniform T, over the
// full state space or a provided state list (conditional Gibbs on a sector).
GibbsResult enumerate_gibbs(const SmallModel& sm, double T);
GibbsResult enumerate_gibbs(const SmallModel& sm, double T,
                            const std::vector<std::uint32_t>& states);

enum class RateRule { HeatBath, Metropolis, Kawasaki };

struct RateModel {
  std::vector<std::uint32_t> states;
  std::vector<double> energy;
  Eigen::MatrixXd K;   // generator: off-diagonal >= 0, rows sum to 0
  Eigen::VectorXd pi;  // stationary distribution, pi K = 0
  std::vector<std::complex<double>> spectrum;
  std::vector<double> relaxation_times;  // -1/Re(lambda), slowest first
  bool reducible = false;

  double slowest_relaxation() const {
    return relaxation_times.empty() ? 0.0 : relaxation_times.front();
  }
};

// Continuous-time jump chain at total event rate `rate`:
//  - HeatBath / Metropolis: single (site, component) flips, each of the n*m
//    channels attempted at rate/(n*m), accepted by the named rule at the
//    node's temperature;
//  - Kawasaki: whole-vector swaps on edges at rate/|E| each, Metropolis
//    acceptance at the edge-mean temperature, restricted to the sector of
//    `seed_state` (states reachable by swaps).
// T_node has one temperature per node (uniform chains pass n copies).
RateModel build_rate_matrix(const SmallModel& sm, RateRule rule,
                            const std::vector<double>& T_node, double rate,
                            std::uint32_t seed_state = 0);

struct BasinDecomposition {
  std::vector<std::uint32_t> attractors;   // sorted by state encoding
  std::vector<int> basin_of;               // per state index in `states`
  std::vector<std::uint32_t> states;       // full state list
  std::vector<std::size_t> basin_sizes;
  Eigen::MatrixXi connectivity;            // boundary adjacency C
  Eigen::MatrixXi hierarchy;               // BFS distances d_B on C (-1 unreachable)
};

// Zero-temperature greedy descent: steepest single-flip decrease, ties broken
// toward the lowest successor encoding; attractors are the strict local
// minima; two basins are connected when some single flip crosses between them.
BasinDecomposition basin_decomposition(const SmallModel& sm);

// k = nu0 * exp(-(dF0 - memory_term)/T): transition-state rate with the
// barrier reduced by the filtered memory and unit transmission coefficient.
double arrhenius_rate(double dF0, double T, double nu0, double memory_term);

}  // namespace trisim
