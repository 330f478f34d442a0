#pragma once

// Test-only oracles and helpers, independent of the library's formulas.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sphf/geometry.hpp"

namespace sphf::testing {

// Exact surface fractions on S^{d-1} by quadrature in spherical coordinates:
// x1 = cos(p1), x2 = sin(p1) cos(p2), with density sin^{d-2}(p1) sin^{d-3}(p2).

// Cumulative trapezoid table of integral_0^psi sin^k(phi) dphi on [0, pi].
class SinPowerTable {
 public:
  SinPowerTable(double k, std::size_t steps = 200000) : h_(kPi / static_cast<double>(steps)) {
    cum_.resize(steps + 1, 0.0);
    double prev = 0.0;
    for (std::size_t i = 1; i <= steps; ++i) {
      const double cur = std::pow(std::sin(h_ * static_cast<double>(i)), k);
      cum_[i] = cum_[i - 1] + 0.5 * h_ * (prev + cur);
      prev = cur;
    }
  }
  double operator()(double psi) const {
    psi = std::clamp(psi, 0.0, kPi);
    const double x = psi / h_;
    const auto i = std::min(static_cast<std::size_t>(x), cum_.size() - 2);
    const double f = x - static_cast<double>(i);
    return cum_[i] + f * (cum_[i + 1] - cum_[i]);
  }
  double total() const { return cum_.back(); }

 private:
  double h_;
  std::vector<double> cum_;
};

/// Pr[<x, e1> >= alpha] for x uniform on S^{d-1}.
inline double exact_cap_fraction(double alpha, std::size_t d) {
  const SinPowerTable t(static_cast<double>(d) - 2.0);
  return t(std::acos(std::clamp(alpha, -1.0, 1.0))) / t.total();
}

/// Pr[<x, u1> >= a1 and <x, u2> >= a2] for unit u1, u2 at angle theta.
inline double exact_wedge_fraction(double a1, double a2, double theta, std::size_t d,
                                   std::size_t outer_steps = 20000) {
  const double k1 = static_cast<double>(d) - 2.0;
  const SinPowerTable inner(static_cast<double>(d) - 3.0);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double top = std::acos(std::clamp(a1, -1.0, 1.0));
  const double h = top / static_cast<double>(outer_steps);
  double acc = 0.0;
  for (std::size_t i = 0; i <= outer_steps; ++i) {
    const double p1 = h * static_cast<double>(i);
    const double sp = std::sin(p1);
    double g = 0.0;
    if (sp > 0.0) {
      const double u = (a2 - c * std::cos(p1)) / (s * sp);
      if (u <= -1.0) {
        g = inner.total();
      } else if (u < 1.0) {
        g = inner(std::acos(u));
      }
    } else {
      g = c * std::cos(p1) >= a2 ? inner.total() : 0.0;
    }
    const double w = (i == 0 || i == outer_steps) ? 0.5 : 1.0;
    acc += w * std::pow(sp, k1) * g;
  }
  acc *= h;
  const SinPowerTable outer(k1);
  return acc / (outer.total() * inner.total());
}

inline std::vector<double> gaussian_vector(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(d);
  for (auto& x : v) x = g(rng);
  return v;
}

/// Uniform random rotation by Gram-Schmidt on Gaussian rows.
inline std::vector<std::vector<double>> random_rotation(std::size_t d, std::mt19937_64& rng) {
  std::vector<std::vector<double>> q;
  while (q.size() < d) {
    auto v = gaussian_vector(d, rng);
    for (const auto& row : q) {
      double p = 0.0;
      for (std::size_t i = 0; i < d; ++i) p += v[i] * row[i];
      for (std::size_t i = 0; i < d; ++i) v[i] -= p * row[i];
    }
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    if (n < 1e-6) continue;
    for (auto& x : v) x /= n;
    q.push_back(std::move(v));
  }
  return q;
}

inline UnitVector rotate(const std::vector<std::vector<double>>& r, const UnitVector& v) {
  std::vector<double> out(v.dim(), 0.0);
  for (std::size_t i = 0; i < v.dim(); ++i) {
    for (std::size_t j = 0; j < v.dim(); ++j) out[i] += r[i][j] * v[j];
  }
  return UnitVector::normalize(std::move(out));
}

}  // namespace sphf::testing
