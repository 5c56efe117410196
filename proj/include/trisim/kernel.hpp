#pragma once
// Exponential-mixture memory kernel K(t) = sum_n a_n (1/tau_n) exp(-t/tau_n)
// and its Markovian embedding: one auxiliary first-order filter per mixture
// component, advanced by an exact exponential step. A direct trapezoid
// convolution is provided as the reference implementation for tests.

#include <vector>

namespace trisim {

struct KernelSpec {
  std::vector<double> a;    // nonnegative weights summing to 1
  std::vector<double> tau;  // positive timescales

  static KernelSpec standard();  // a = {0.6, 0.3, 0.1}, tau = {0.1, 1, 10}
  std::size_t components() const { return a.size(); }
  void validate() const;  // throws on malformed spec
  double max_tau() const;
};

// K(t); throws on negative t.
double kernel_eval(const KernelSpec& k, double t);

// Numerical kernel mass on [0, upper] by composite Simpson quadrature.
double kernel_mass(const KernelSpec& k, double upper, std::size_t panels);

struct EmbeddingState {
  std::vector<double> m;  // one entry per mixture component

  static EmbeddingState zero(const KernelSpec& k);
  // Filtered signal value: sum of components.
  double value() const;
};

// Exact exponential update with the drive held constant over the step:
// m_n <- m_n e^{-dt/tau_n} + a_n (1 - e^{-dt/tau_n}) u.
void embed_step(EmbeddingState& e, const KernelSpec& k, double u, double dt);

// Reference: utilde(t_i) = int_0^{t_i} K(t_i - s) u(s) ds by trapezoid rule
// on the uniform samples u[0..i]. Single output point, O(i).
double direct_convolution_at(const KernelSpec& k, const std::vector<double>& u,
                             double dt, std::size_t i);

// All output points; O(T^2), test oracle for short signals only.
std::vector<double> direct_convolution_oracle(const KernelSpec& k,
                                              const std::vector<double>& u,
                                              double dt);

}  // namespace trisim
