#pragma once
// Dynamic 3-uniform hypergraph over a fixed agent set, with the induced
// 2-section graph kept as a cache, triad neighborhoods, Laplacians, and the
// low-order topological invariants used by the rest of the engine.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace trisim {

using Triad = std::array<int, 3>;  // always stored sorted ascending
using Edge = std::pair<int, int>;  // always stored with first < second

Triad make_triad(int a, int b, int c);
Edge make_edge(int i, int j);

class TriadicHypergraph {
 public:
  TriadicHypergraph() = default;
  explicit TriadicHypergraph(int n_agents);

  int n_agents() const { return n_; }
  const std::vector<Triad>& triads() const { return triads_; }
  std::size_t n_triads() const { return triads_.size(); }
  bool has_triad(const Triad& t) const;
  // Index of a triad in triads(), if active.
  std::optional<std::size_t> triad_index(const Triad& t) const;

  void add_triad(const Triad& t);
  void remove_triad(const Triad& t);

  // 2-section: edges supported by at least one active triad.
  const std::map<Edge, int>& edge_support() const { return support_; }
  std::vector<Edge> edges() const;
  std::size_t n_edges() const { return support_.size(); }
  bool has_edge(int i, int j) const;

  // Symmetric nonnegative edge weight; defaults to 1 on 2-section edges.
  double weight(int i, int j) const;
  void set_weight(int i, int j, double w);
  const std::map<Edge, double>& explicit_weights() const { return weights_; }

  // Sorted neighbor lists in the 2-section.
  const std::vector<int>& neighbors(int i) const;
  // Triads containing agent i (indices into triads()).
  std::vector<std::size_t> triads_of(int i) const;

  // Local density rho_i = |E_i^(3)| / C(n-1, 2).
  double local_density(int i) const;
  // Fraction of pairs of agent-i triads sharing exactly two nodes.
  double clustering_coefficient(int i) const;
  // BFS hop distance on the 2-section; nullopt when disconnected.
  std::optional<int> path_length(int i, int j) const;

  struct GlobalStats {
    double mean_density = 0;
    double mean_clustering = 0;
    double mean_path_length = 0;  // over reachable ordered pairs
    std::size_t unreachable_pairs = 0;
  };
  GlobalStats global_stats() const;

  // chi = |V| - |E2| + |E3|.
  long euler_characteristic() const;
  // beta0 = connected components of the 2-section, beta1 = cycle rank.
  std::pair<int, long> betti01() const;

  // (L f)_i = sum_j w_ij (f_i - f_j).
  std::vector<double> laplacian_apply(const std::vector<double>& f) const;
  // exp(-ell L) f by dense symmetric eigendecomposition.
  std::vector<double> heat_kernel_smooth(const std::vector<double>& f,
                                         double ell) const;

  // Rebuild all caches from the triad list and compare; used by tests and
  // after structural events in debug checks.
  bool caches_consistent() const;

 private:
  void add_edges_of(const Triad& t);
  void remove_edges_of(const Triad& t);

  int n_ = 0;
  std::vector<Triad> triads_;          // sorted, unique
  std::map<Edge, double> weights_;     // only explicitly set weights
  std::map<Edge, int> support_;        // edge -> number of supporting triads
  std::vector<std::vector<int>> adj_;  // sorted adjacency lists
};

// Triad neighborhoods: tau' with tau cap tau' nonempty, plus the two-overlap
// subset and the coupling weights w_{tau tau'} (1 on two-overlap, else 0).
struct TriadNeighborhood {
  struct Entry {
    std::size_t index;  // into hypergraph triad list
    int overlap;        // |tau cap tau'| in {1, 2}
    double weight;      // coupling weight
  };
  std::vector<std::vector<Entry>> of;  // per triad

  static TriadNeighborhood build(const TriadicHypergraph& h);

  // (L3 f)_tau = sum_{tau'} w_{tau tau'} (f_tau - f_tau').
  std::vector<double> laplacian_apply(const std::vector<double>& f) const;
};

}  // namespace trisim
