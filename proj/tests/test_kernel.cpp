// Exponential-mixture memory kernel: pointwise values, normalized mass,
// exactness of the Markovian embedding for piecewise-constant drives, and
// agreement with the direct trapezoid convolution.
#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstddef>
#include <vector>

#include "trisim/kernel.hpp"

using namespace trisim;

TEST_CASE("standard kernel values and normalization") {
  const auto k = KernelSpec::standard();
  k.validate();
  CHECK(k.components() == 3);
  CHECK(k.max_tau() == doctest::Approx(10.0));
  // K(0) = 0.6/0.1 + 0.3/1 + 0.1/10 = 6.31 exactly.
  CHECK(kernel_eval(k, 0.0) == doctest::Approx(6.31).epsilon(1e-14));
  // K(1) = 6 e^{-10} + 0.3 e^{-1} + 0.01 e^{-0.1}.
  const double k1 = 6.0 * std::exp(-10.0) + 0.3 * std::exp(-1.0) +
                    0.01 * std::exp(-0.1);
  CHECK(kernel_eval(k, 1.0) == doctest::Approx(k1).epsilon(1e-14));
  CHECK_THROWS_AS(kernel_eval(k, -1e-9), std::invalid_argument);

  // Simpson mass over [0, 20 tau_max] reproduces the unit normalization.
  CHECK(kernel_mass(k, 20.0 * k.max_tau(), 200000) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(kernel_mass(k, -1.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(kernel_mass(k, 1.0, 0), std::invalid_argument);
}

TEST_CASE("kernel decreases monotonically for positive weights") {
  const auto k = KernelSpec::standard();
  double prev = kernel_eval(k, 0.0);
  for (int i = 1; i <= 100; ++i) {
    const double cur = kernel_eval(k, 0.05 * i);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("malformed specs are rejected") {
  KernelSpec k;
  k.a = {0.5, 0.5};
  k.tau = {1.0};
  CHECK_THROWS_AS(k.validate(), std::invalid_argument);
  k.tau = {1.0, -2.0};
  CHECK_THROWS_AS(k.validate(), std::invalid_argument);
  k.tau = {1.0, 2.0};
  k.a = {-0.1, 1.1};
  CHECK_THROWS_AS(k.validate(), std::invalid_argument);
  k.a = {0.5, 0.4};  // mass 0.9
  CHECK_THROWS_AS(k.validate(), std::invalid_argument);
  k.a = {0.5, 0.5};
  CHECK_NOTHROW(k.validate());
}

TEST_CASE("embedding step is exact for a constant drive") {
  const auto k = KernelSpec::standard();
  auto e = EmbeddingState::zero(k);
  CHECK(e.value() == 0.0);

  // One long step with u = 2: m_n = a_n (1 - e^{-dt/tau_n}) u, no dt error.
  const double dt = 0.7, u = 2.0;
  embed_step(e, k, u, dt);
  double expect = 0;
  for (std::size_t n = 0; n < k.components(); ++n)
    expect += k.a[n] * (1.0 - std::exp(-dt / k.tau[n])) * u;
  CHECK(e.value() == doctest::Approx(expect).epsilon(1e-15));

  // Many steps with u = 1 converge to the unit kernel mass.
  auto s = EmbeddingState::zero(k);
  for (int i = 0; i < 2000; ++i) embed_step(s, k, 1.0, 0.05);  // t = 100
  CHECK(s.value() == doctest::Approx(1.0).epsilon(1e-4));

  auto wrong = EmbeddingState::zero(k);
  wrong.m.push_back(0.0);
  CHECK_THROWS_WITH_AS(embed_step(wrong, k, 1.0, 0.1),
                       "embedding/kernel size mismatch", std::invalid_argument);
  CHECK_THROWS_AS(embed_step(e, k, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("embedding matches the trapezoid convolution for a smooth drive") {
  const auto k = KernelSpec::standard();
  const double dt = 1e-3;
  const std::size_t n = 2001;  // t in [0, 2]
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::sin(2.0 * dt * i);

  // Drive the embedding with midpoint samples so both discretizations are
  // second-order accurate approximations of the same continuous signal.
  auto e = EmbeddingState::zero(k);
  std::vector<double> embedded(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    embed_step(e, k, std::sin(2.0 * dt * (i - 0.5)), dt);
    embedded[i] = e.value();
  }

  const auto ref = direct_convolution_oracle(k, u, dt);
  REQUIRE(ref.size() == n);
  double sup = 0;
  for (std::size_t i = 0; i < n; ++i)
    sup = std::max(sup, std::abs(embedded[i] - ref[i]));
  CHECK(sup <= 5e-5);

  // Single-point evaluation agrees with the full oracle.
  CHECK(direct_convolution_at(k, u, dt, n - 1) ==
        doctest::Approx(ref.back()).epsilon(1e-14));
  CHECK_THROWS_WITH_AS(direct_convolution_at(k, u, dt, n),
                       "convolution index", std::out_of_range);
}
