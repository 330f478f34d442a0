#include "sphf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sphf {

Angle::Angle(double radians) : radians_(radians) {
  if (!(radians >= 0.0 && radians <= kPi)) {
    throw std::invalid_argument("angle " + std::to_string(radians) + " outside [0, pi]");
  }
}

double Angle::cos() const { return std::cos(radians_); }
double Angle::sin() const { return std::sin(radians_); }

UnitVector::UnitVector(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) {
    throw std::invalid_argument("unit vector needs dimension >= 2");
  }
  const double n = norm(coords_);
  if (std::abs(n - 1.0) > kUnitNormTolerance) {
    throw std::invalid_argument("vector norm " + std::to_string(n) + " is not 1");
  }
}

UnitVector UnitVector::normalize(std::vector<double> coords) {
  const double n = norm(coords);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  }
  for (double& x : coords) x /= n;
  return UnitVector(std::move(coords));
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

UnitVector random_unit_vector(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::vector<double> g(d);
  for (;;) {
    for (double& x : g) x = gauss(rng);
    if (norm(g) > 0.0) return UnitVector::normalize(std::move(g));
  }
}

Angle angle_between(const UnitVector& u, const UnitVector& v) {
  if (u.dim() != v.dim()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(u.dim()) + " vs " +
                                std::to_string(v.dim()));
  }
  return Angle(std::acos(std::clamp(dot(u.coords(), v.coords()), -1.0, 1.0)));
}

namespace {

void check_alpha(double alpha, const char* name) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument(std::string(name) + " = " + std::to_string(alpha) +
                                " outside [0, 1)");
  }
}

void check_open_angle(Angle theta) {
  if (!(theta.radians() > 0.0 && theta.radians() < kPi)) {
    throw std::invalid_argument("wedge angle must lie strictly between 0 and pi");
  }
}

double gamma_squared(double a1, double a2, Angle theta) {
  const double s = theta.sin();
  return (a1 * a1 + a2 * a2 - 2.0 * a1 * a2 * theta.cos()) / (s * s);
}

}  // namespace

double cap_log_volume(double alpha) {
  check_alpha(alpha, "alpha");
  return 0.5 * std::log1p(-alpha * alpha);
}

std::optional<double> wedge_gamma(double alpha1, double alpha2, Angle theta) {
  check_alpha(alpha1, "alpha1");
  check_alpha(alpha2, "alpha2");
  check_open_angle(theta);
  const double g2 = gamma_squared(alpha1, alpha2, theta);
  if (g2 > 1.0) return std::nullopt;
  return std::sqrt(std::max(g2, 0.0));
}

double wedge_log_volume(double alpha1, double alpha2, Angle theta) {
  check_alpha(alpha1, "alpha1");
  check_alpha(alpha2, "alpha2");
  check_open_angle(theta);
  const double g2 = std::max(gamma_squared(alpha1, alpha2, theta), 0.0);
  if (g2 > 1.0) {
    throw EmptyWedge("wedge is empty (gamma^2 = " + std::to_string(g2) + " > 1)");
  }
  return 0.5 * std::log1p(-g2);
}

double VolumeEstimate::asymptotic_volume(std::size_t d) const {
  return std::exp(static_cast<double>(d) * log_relative_volume_per_dim);
}

VolumeEstimate cap_volume(double alpha) {
  VolumeEstimate v;
  v.log_relative_volume_per_dim = cap_log_volume(alpha);
  return v;
}

VolumeEstimate wedge_volume(double alpha1, double alpha2, Angle theta) {
  VolumeEstimate v;
  v.gamma = wedge_gamma(alpha1, alpha2, theta);
  v.log_relative_volume_per_dim =
      v.gamma ? 0.5 * std::log1p(-(*v.gamma) * (*v.gamma))
              : -std::numeric_limits<double>::infinity();
  return v;
}

namespace {

// Only the first one or two coordinates of a uniform point matter for caps and
// wedges around fixed axes. A uniform point is g / |g| for a standard normal g,
// and |g|^2 splits into the leading squares plus an independent chi-square on
// the remaining coordinates, so sampling that chi-square directly gives the
// same distribution without drawing all d normals.
class MarginalSampler {
 public:
  MarginalSampler(std::size_t d, std::size_t leading, std::uint64_t seed)
      : rng_(seed), rest_(d - leading) {
    if (rest_ > 0) chi2_ = std::gamma_distribution<double>(0.5 * static_cast<double>(rest_), 2.0);
  }

  // Fills the leading coordinates of a fresh uniform point.
  template <std::size_t N>
  void draw(double (&x)[N]) {
    double sq = 0.0;
    for (;;) {
      sq = 0.0;
      for (double& v : x) {
        v = gauss_(rng_);
        sq += v * v;
      }
      if (rest_ > 0) sq += chi2_(rng_);
      if (sq > 0.0) break;
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (double& v : x) v *= inv;
  }

 private:
  std::mt19937_64 rng_;
  std::size_t rest_;
  std::normal_distribution<double> gauss_;
  std::gamma_distribution<double> chi2_;
};

McEstimate binomial(std::uint64_t hits, std::uint64_t samples) {
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

void check_mc(std::size_t d, std::uint64_t samples) {
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  if (samples < 1) throw std::invalid_argument("need at least one sample");
}

}  // namespace

McEstimate mc_cap_volume(double alpha, std::size_t d, std::uint64_t samples, std::uint64_t seed) {
  check_mc(d, samples);
  MarginalSampler sampler(d, 1, seed);
  std::uint64_t hits = 0;
  double x[1];
  for (std::uint64_t i = 0; i < samples; ++i) {
    sampler.draw(x);
    if (x[0] >= alpha) ++hits;
  }
  return binomial(hits, samples);
}

McEstimate mc_wedge_volume(double alpha1, double alpha2, Angle theta, std::size_t d,
                           std::uint64_t samples, std::uint64_t seed) {
  check_mc(d, samples);
  // u1 = e1, u2 = cos(theta) e1 + sin(theta) e2.
  const double c = theta.cos();
  const double s = theta.sin();
  MarginalSampler sampler(d, 2, seed);
  std::uint64_t hits = 0;
  double x[2];
  for (std::uint64_t i = 0; i < samples; ++i) {
    sampler.draw(x);
    if (x[0] >= alpha1 && c * x[0] + s * x[1] >= alpha2) ++hits;
  }
  return binomial(hits, samples);
}

}  // namespace sphf
