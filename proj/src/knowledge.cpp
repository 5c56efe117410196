#include "trisim/knowledge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trisim {

KnowledgeState KnowledgeState::uniform(std::size_t n) {
  KnowledgeState s;
  s.p.assign(n, 1.0 / static_cast<double>(n));
  return s;
}

KnowledgeState KnowledgeState::delta(std::size_t n, std::size_t k) {
  if (k >= n) throw std::out_of_range("delta atom outside grid");
  KnowledgeState s;
  s.p.assign(n, 0.0);
  s.p[k] = 1.0;
  return s;
}

double KnowledgeState::mean() const {
  double m = 0;
  for (std::size_t k = 0; k < p.size(); ++k)
    m += p[k] * grid_point(p.size(), k);
  return m;
}

bool KnowledgeState::valid(double tol) const {
  double sum = 0;
  for (double v : p) {
    if (!(v >= 0)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

double grid_point(std::size_t n, std::size_t k) {
  return static_cast<double>(k) / static_cast<double>(n);
}

namespace {

void check_same_grid(const KnowledgeState& a, const KnowledgeState& b) {
  if (a.size() != b.size() || a.size() == 0)
    throw std::invalid_argument("knowledge states must share a nonempty grid");
}

// Walk the two quantile functions jointly; calls f(mass, xa, xb) per merged
// segment of cumulative mass.
template <typename F>
void merged_quantile_segments(const KnowledgeState& a, const KnowledgeState& b,
                              F&& f) {
  const std::size_t n = a.size();
  std::size_t ia = 0, ib = 0;
  double ca = 0, cb = 0;  // mass consumed inside current atoms
  double remaining = 1.0;
  while (ia < n && ib < n) {
    while (ia < n && a.p[ia] - ca <= 0) {
      ca = 0;
      ++ia;
    }
    while (ib < n && b.p[ib] - cb <= 0) {
      cb = 0;
      ++ib;
    }
    if (ia >= n || ib >= n) break;
    const double da = a.p[ia] - ca;
    const double db = b.p[ib] - cb;
    double step = std::min(da, db);
    step = std::min(step, remaining);
    if (step > 0)
      f(step, grid_point(n, ia), grid_point(n, ib));
    ca += step;
    cb += step;
    remaining -= step;
    if (remaining <= 1e-15) break;
  }
}

}  // namespace

double wasserstein2_sq(const KnowledgeState& a, const KnowledgeState& b) {
  check_same_grid(a, b);
  double acc = 0;
  merged_quantile_segments(a, b, [&](double mass, double xa, double xb) {
    const double d = xa - xb;
    acc += mass * d * d;
  });
  return acc;
}

double wasserstein2(const KnowledgeState& a, const KnowledgeState& b) {
  return std::sqrt(std::max(0.0, wasserstein2_sq(a, b)));
}

KnowledgeState barycenter2(const KnowledgeState& a, const KnowledgeState& b) {
  check_same_grid(a, b);
  const std::size_t n = a.size();
  KnowledgeState out;
  out.p.assign(n, 0.0);
  const double h = 1.0 / static_cast<double>(n);
  merged_quantile_segments(a, b, [&](double mass, double xa, double xb) {
    const double x = 0.5 * (xa + xb);
    // Deposit between the bracketing atoms, preserving mass and mean.
    const double pos = x / h;
    std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    if (lo >= n - 1) lo = n - 2 < n ? n - 2 : 0;
    const double frac = pos - static_cast<double>(lo);
    if (n == 1) {
      out.p[0] += mass;
    } else {
      out.p[lo] += mass * (1.0 - frac);
      out.p[lo + 1] += mass * frac;
    }
  });
  return out;
}

double wasserstein2_sq_quantile_oracle(const KnowledgeState& a,
                                       const KnowledgeState& b,
                                       std::size_t resolution) {
  check_same_grid(a, b);
  const std::size_t n = a.size();
  auto quantile = [&](const KnowledgeState& s, double q) {
    double c = 0;
    for (std::size_t k = 0; k < n; ++k) {
      c += s.p[k];
      if (c >= q) return grid_point(n, k);
    }
    return grid_point(n, n - 1);
  };
  // Midpoint rule over quantile levels; exact in the limit for step quantile
  // functions, used only as a cross-check at high resolution.
  double acc = 0;
  for (std::size_t r = 0; r < resolution; ++r) {
    const double q = (static_cast<double>(r) + 0.5) /
                     static_cast<double>(resolution);
    const double d = quantile(a, q) - quantile(b, q);
    acc += d * d;
  }
  return acc / static_cast<double>(resolution);
}

std::vector<std::int8_t> median_opinion(const std::vector<std::int8_t>& sj,
                                        const std::vector<std::int8_t>& sk) {
  if (sj.size() != sk.size())
    throw std::invalid_argument("opinion length mismatch");
  std::vector<std::int8_t> med(sj.size());
  for (std::size_t l = 0; l < sj.size(); ++l)
    med[l] = sj[l] == sk[l] ? sj[l] : std::int8_t{0};
  return med;
}

double hamming_to_median(const std::vector<std::int8_t>& si,
                         const std::vector<std::int8_t>& med) {
  if (si.size() != med.size())
    throw std::invalid_argument("opinion length mismatch");
  double d = 0;
  for (std::size_t l = 0; l < si.size(); ++l) {
    if (med[l] == 0)
      d += 0.5;
    else if (si[l] != med[l])
      d += 1.0;
  }
  return d;
}

}  // namespace trisim
