#include "trisim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trisim {

KernelSpec KernelSpec::standard() {
  return KernelSpec{{0.6, 0.3, 0.1}, {0.1, 1.0, 10.0}};
}

void KernelSpec::validate() const {
  if (a.size() != tau.size() || a.empty())
    throw std::invalid_argument("kernel weights/timescales mismatch");
  double sum = 0;
  for (double w : a) {
    if (!(w >= 0)) throw std::invalid_argument("negative kernel weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("kernel weights must sum to 1");
  for (double t : tau)
    if (!(t > 0)) throw std::invalid_argument("kernel timescale must be > 0");
}

double KernelSpec::max_tau() const {
  return *std::max_element(tau.begin(), tau.end());
}

double kernel_eval(const KernelSpec& k, double t) {
  if (t < 0) throw std::invalid_argument("kernel argument must be >= 0");
  double v = 0;
  for (std::size_t n = 0; n < k.a.size(); ++n)
    v += k.a[n] / k.tau[n] * std::exp(-t / k.tau[n]);
  return v;
}

double kernel_mass(const KernelSpec& k, double upper, std::size_t panels) {
  if (upper < 0 || panels == 0)
    throw std::invalid_argument("bad quadrature parameters");
  const double h = upper / static_cast<double>(2 * panels);
  double acc = kernel_eval(k, 0.0) + kernel_eval(k, upper);
  for (std::size_t i = 1; i < 2 * panels; ++i)
    acc += kernel_eval(k, h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

EmbeddingState EmbeddingState::zero(const KernelSpec& k) {
  EmbeddingState e;
  e.m.assign(k.components(), 0.0);
  return e;
}

double EmbeddingState::value() const {
  double v = 0;
  for (double x : m) v += x;
  return v;
}

void embed_step(EmbeddingState& e, const KernelSpec& k, double u, double dt) {
  if (dt <= 0) throw std::invalid_argument("step size must be > 0");
  if (e.m.size() != k.components())
    throw std::invalid_argument("embedding/kernel size mismatch");
  for (std::size_t n = 0; n < e.m.size(); ++n) {
    const double decay = std::exp(-dt / k.tau[n]);
    e.m[n] = e.m[n] * decay + k.a[n] * (1.0 - decay) * u;
  }
}

double direct_convolution_at(const KernelSpec& k, const std::vector<double>& u,
                             double dt, std::size_t i) {
  if (dt <= 0) throw std::invalid_argument("step size must be > 0");
  if (i >= u.size()) throw std::out_of_range("convolution index");
  if (i == 0) return 0.0;
  double acc = 0.5 * (kernel_eval(k, dt * static_cast<double>(i)) * u[0] +
                      kernel_eval(k, 0.0) * u[i]);
  for (std::size_t j = 1; j < i; ++j)
    acc += kernel_eval(k, dt * static_cast<double>(i - j)) * u[j];
  return acc * dt;
}

std::vector<double> direct_convolution_oracle(const KernelSpec& k,
                                              const std::vector<double>& u,
                                              double dt) {
  std::vector<double> out(u.size(), 0.0);
  for (std::size_t i = 1; i < u.size(); ++i)
    out[i] = direct_convolution_at(k, u, dt, i);
  return out;
}

}  // namespace trisim
