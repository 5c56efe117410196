#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trisim/agent.hpp"

namespace trisim {

// One named scalar track sampled along a run.
struct ObservableSeries {
  std::string name;
  std::vector<double> times;   // strictly increasing
  std::vector<double> values;
  std::string run_id;
  std::uint64_t seed = 0;
};

// Instantaneous order parameters of one configuration.
struct OrderParameters {
  double psi_form = 0;   // mean over triads of phi_i phi_j phi_k
  double phi_align = 0;  // mean triad generator-alignment cosine
  double coherence = 0;  // mean over edges of s_i.s_j / m, in [-1, 1]
  double psi_mem = 0;    // population variance of node memory
  double phi_role = 0;   // fraction of incidences matching the reference roles
  double phi_sync = 0;   // |mean exp(i theta)|
};

// Slot-wise role assignment per triad, keyed by the triad itself so the
// reference survives births and deaths between snapshot and measurement.
using RoleReference = std::map<Triad, std::array<Role, 3>>;

RoleReference role_snapshot(const Configuration& c);

// phi_role is measured against `ref` (pass nullptr to report 1: no reference
// means nothing can have drifted). Triads absent from the reference are
// skipped; with no comparable incidence phi_role is 1.
OrderParameters order_parameters(const Configuration& c,
                                 const RoleReference* ref = nullptr);

// chi = population variance of the series / (N T). Throws on fewer than two
// samples or T <= 0.
double susceptibility(const std::vector<double>& series, int n_agents,
                      double temperature);

// Connected opinion correlations over an ensemble of snapshots.
struct CorrelationReport {
  Eigen::MatrixXd c_local;        // <s_i.s_j> - <s_i>.<s_j> (raw dot, not /m)
  double c_global = 0;            // mean of all c_local entries
  std::vector<double> g;          // g[k]: mean c_local over pairs at hop k+1
  std::vector<long> pair_counts;  // pairs contributing to each hop bin
};

// Hop distances are taken on the 2-section of the last snapshot; pairs with
// no path are left out of g. Throws on fewer than two snapshots or mismatched
// agent counts.
CorrelationReport correlation_functions(const std::vector<Configuration>& ensemble);

// Stored +-1 opinion patterns, each a flattened N x m matrix (agent-major).
struct PatternBank {
  int n_agents = 0;
  int m = 0;
  std::vector<std::vector<std::int8_t>> patterns;
};

PatternBank random_pattern_bank(int n_agents, int m, int count, Rng& rng);

// Per-pattern retrieval quality. raw = cosine(pattern, current opinions
// flattened); modulated = raw * (1 + gamma * filtered global memory).
struct PatternOverlap {
  std::vector<double> raw;
  std::vector<double> modulated;
};

PatternOverlap pattern_overlap(const Configuration& c, const PatternBank& bank,
                               double gamma);

// Histogram plug-in estimator with natural log; both series binned on their
// own [min, max] range. Throws on length mismatch or length < 100.
double mutual_information(const std::vector<double>& x,
                          const std::vector<double>& y, int bins);

// One-sided spectral density of the mean-removed series. value[k] is the power
// in frequency bin k (grid 0..Nyquist, spacing df); sum(value) * df equals the
// population variance exactly (Parseval).
struct SpectralDensity {
  std::vector<double> freq;
  std::vector<double> value;
  double df = 0;
};

SpectralDensity spectral_capacity(const std::vector<double>& series, double dt);

// S_hier = S_global - mean_i S_local,i - mean_tau S_meso,tau over a window of
// snapshots. S_local,i: entropy of agent i's opinion pattern (2^m alphabet);
// S_meso,tau: joint member pattern (2^{3m}) for the first snapshot's triads;
// S_global: entropy of the group-coherence series over `bins` bins on [-1, 1].
// Natural log throughout. Throws when the window is empty or m > 3.
struct HierarchicalEntropy {
  double s_global = 0;
  double mean_s_local = 0;
  double mean_s_meso = 0;
  double value = 0;
};

HierarchicalEntropy hierarchical_entropy(const std::vector<Configuration>& window,
                                         int bins);

// Jump-sector entropy production sum_{k,k'} pi_k K(k,k') ln(pi_k K(k,k') /
// (pi_k' K(k',k))). A used transition with zero reverse rate sets `infinite`.
struct EntropyProduction {
  double value = 0;
  bool infinite = false;
};

EntropyProduction entropy_production_jump(const Eigen::MatrixXd& K,
                                          const Eigen::VectorXd& pi);

// Micro/meso/macro views of the formation field: node values, per-triad member
// means, heat-kernel smoothing exp(-l L) of the node values. meso_node_view is
// the meso field pushed back onto nodes (mean over incident triads, 0 when
// isolated).
struct ScaleProjection {
  std::vector<double> micro;
  std::vector<double> meso;
  std::vector<double> macro;
  std::vector<double> meso_node_view;
};

ScaleProjection scale_projections(const Configuration& c, double length);

// Least-squares estimate of the 2x2 mixed-mode drift matrix from a stationary
// window: d(phi_align, c)/dt ~ J * deviations. std_err holds the entrywise
// standard errors. Throws on fewer than four samples.
struct JmixEstimate {
  Eigen::Matrix2d J;
  Eigen::Matrix2d std_err;
};

JmixEstimate jmix_estimate(const std::vector<double>& times,
                           const std::vector<double>& phi_align,
                           const std::vector<double>& coherence);

}  // namespace trisim
