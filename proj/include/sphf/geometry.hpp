#pragma once

// Points, angles and relative volumes of spherical caps and wedges on S^{d-1}.
//
// Volumes are reported as per-dimension log exponents: a cap of height alpha
// covers roughly exp(d * cap_log_volume(alpha)) of the sphere, up to factors
// polynomial in d. The Monte Carlo estimators give the true finite-d fraction.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace sphf {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kUnitNormTolerance = 1e-9;

/// Raised when two caps do not intersect at the requested heights (gamma^2 > 1).
class EmptyWedge : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Angle in [0, pi].
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians);

  static Angle from_degrees(double degrees) { return Angle(degrees * kPi / 180.0); }

  double radians() const { return radians_; }
  double cos() const;
  double sin() const;

  friend bool operator==(Angle a, Angle b) = default;
  friend auto operator<=>(Angle a, Angle b) = default;

 private:
  double radians_ = 0.0;
};

/// Point on the unit sphere in R^d, d >= 2.
class UnitVector {
 public:
  /// Takes ownership of already-normalized coordinates; throws if the norm
  /// is off by more than kUnitNormTolerance.
  explicit UnitVector(std::vector<double> coords);

  /// Scales `coords` to unit length. Throws on the zero vector.
  static UnitVector normalize(std::vector<double> coords);

  std::size_t dim() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const UnitVector&, const UnitVector&) = default;

 private:
  std::vector<double> coords_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// Uniform point on S^{d-1}: d standard normals, normalized.
UnitVector random_unit_vector(std::size_t d, std::mt19937_64& rng);

Angle angle_between(const UnitVector& u, const UnitVector& v);

/// (1/2) ln(1 - alpha^2). Requires 0 <= alpha < 1.
double cap_log_volume(double alpha);

/// gamma with gamma^2 = (a1^2 + a2^2 - 2 a1 a2 cos theta) / sin^2 theta,
/// or nullopt when gamma^2 > 1 (the wedge is empty).
std::optional<double> wedge_gamma(double alpha1, double alpha2, Angle theta);

/// (1/2) ln(1 - gamma^2). Throws EmptyWedge when gamma^2 > 1.
double wedge_log_volume(double alpha1, double alpha2, Angle theta);

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;  // binomial standard error
};

struct VolumeEstimate {
  double log_relative_volume_per_dim = 0.0;  // -inf for an empty wedge
  std::optional<double> gamma;
  std::optional<McEstimate> mc;

  /// exp(d * log_relative_volume_per_dim).
  double asymptotic_volume(std::size_t d) const;
};

VolumeEstimate cap_volume(double alpha);
/// Never throws EmptyWedge; an empty wedge has log volume -inf and no gamma.
VolumeEstimate wedge_volume(double alpha1, double alpha2, Angle theta);

McEstimate mc_cap_volume(double alpha, std::size_t d, std::uint64_t samples, std::uint64_t seed);
McEstimate mc_wedge_volume(double alpha1, double alpha2, Angle theta, std::size_t d,
                           std::uint64_t samples, std::uint64_t seed);

}  // namespace sphf
