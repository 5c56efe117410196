#pragma once
// Standalone noise-structure utilities: temperature-dependent amplitudes and
// an Ornstein-Uhlenbeck colored-noise generator. These model the richer noise
// correlations; the main integrator uses node-local white noise.

#include "trisim/rng.hpp"

namespace trisim {

// Cross-component coupling amplitude sigma_0 * tanh(T_c / T).
double noise_cross_amplitude(double T, double sigma0, double T_c);

// Arrhenius diffusion coefficient D_0 * exp(-E / T).
double noise_diffusion(double T, double D0, double E);

// Gradient-enhanced damping Gamma_0 * (1 + gamma * |grad T|^2 / T^2).
double noise_damping(double T, double grad_sq, double Gamma0, double gamma);

// Exact-discretization Ornstein-Uhlenbeck process with stationary standard
// deviation sigma and correlation time tau.
struct OuProcess {
  double x = 0;
  double tau = 1;
  double sigma = 1;

  // x <- rho x + sqrt(1 - rho^2) sigma xi, rho = exp(-dt/tau).
  double step(Rng& rng, double dt);
};

}  // namespace trisim
