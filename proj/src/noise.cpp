#include "trisim/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace trisim {

double noise_cross_amplitude(double T, double sigma0, double T_c) {
  if (T <= 0) throw std::invalid_argument("temperature must be positive");
  return sigma0 * std::tanh(T_c / T);
}

double noise_diffusion(double T, double D0, double E) {
  if (T <= 0) throw std::invalid_argument("temperature must be positive");
  return D0 * std::exp(-E / T);
}

double noise_damping(double T, double grad_sq, double Gamma0, double gamma) {
  if (T <= 0) throw std::invalid_argument("temperature must be positive");
  return Gamma0 * (1.0 + gamma * grad_sq / (T * T));
}

double OuProcess::step(Rng& rng, double dt) {
  if (dt <= 0) throw std::invalid_argument("dt must be positive");
  double rho = std::exp(-dt / tau);
  x = rho * x + std::sqrt(1.0 - rho * rho) * sigma * rng.normal();
  return x;
}

}  // namespace trisim
