#pragma once

// Parameter planning for asymmetric spherical filters.
//
// beta = alpha_q / alpha_u steers the tradeoff between query time n^rho_q and
// update time n^rho_u. Useful values lie in [cos theta, 1 / cos theta]:
// beta = cos theta minimizes space, beta = 1 balances, beta = 1 / cos theta
// minimizes query time. All logarithms are natural.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sphf/geometry.hpp"
#include "sphf/product_code.hpp"

namespace sphf {

enum class Regime { sparse, dense, critical };

std::string to_string(Regime r);
Regime parse_regime(const std::string& s);

struct Exponents {
  double rho_q = 0.0;
  double rho_u = 0.0;
};

/// cos theta = 1 - 1/c^2. Requires c > 1.
Angle theta_from_c(double c);
/// Inverse of theta_from_c for 0 < theta < pi/2.
double c_from_theta(Angle theta);

/// Throws std::invalid_argument naming [cos theta, 1/cos theta] when beta is
/// outside it (a relative slack of 1e-12 admits computed endpoints).
void check_beta_range(Angle theta, double beta);

/// Leading-order sparse exponents: rho_q = ((1 - beta cos)/sin)^2,
/// rho_u = ((beta - cos)/sin)^2.
Exponents sparse_exponents(Angle theta, double beta);

enum class Target { rho_q, rho_u };

/// beta achieving the given exponent on the sparse tradeoff curve.
double beta_for_target(Angle theta, Target target, double value);

/// Normalized log costs log(volume) / log n at the balanced sparse parameters.
struct SparseCostExponents {
  double cap_query = 0.0;     // log C(alpha_q) / log n = -beta^2
  double cap_update = 0.0;    // log C(alpha_u) / log n = -1
  double wedge_near = 0.0;    // log W(alpha_q, alpha_u, theta) / log n
  double wedge_far = 0.0;     // log W(alpha_q, alpha_u, pi/2) / log n = -1 - beta^2
};

SparseCostExponents sparse_cost_exponents(double beta, Angle theta);

/// Dataset density given in the log domain so that n = (1/sin theta)^d and
/// other non-integer or astronomically large sizes are representable.
struct Density {
  double log_n = 0.0;
  std::size_t d = 0;

  static Density of_count(double n, std::size_t d);
  /// Density with n^{2/d} = 1 + excess.
  static Density from_growth_excess(double excess, std::size_t d);

  /// ln(n^{2/d}).
  double log_growth() const { return 2.0 * log_n / static_cast<double>(d); }
  /// 1 - n^{-2/d}, computed without cancellation.
  double one_minus_inverse_growth() const;
  double n() const;
};

/// Exponents for uniformly random data of the given density. Throws
/// std::domain_error when a logarithm argument is non-positive, i.e. beta is
/// too close to 1/cos theta for this density and update costs blow up.
Exponents dense_exponents(Density density, Angle theta, double beta);

/// Exponents at the critical density n = (1/sin theta)^d.
Exponents critical_exponents(Angle theta, double beta);

struct CriticalDensity {
  double log_n = 0.0;                 // d ln(1/sin theta)
  std::optional<std::uint64_t> n;     // rounded count, empty on overflow
};

CriticalDensity critical_density(Angle theta, std::size_t d);

struct TradeoffPoint {
  double beta = 0.0;
  double rho_q = 0.0;
  double rho_u = 0.0;
  std::optional<double> c;
  std::optional<double> delta;
};

/// beta swept uniformly over [cos theta, 1/cos theta]. The dense regime needs
/// a density. At the critical density the update exponent diverges at
/// beta = 1/cos theta; that endpoint is emitted with rho_u = +inf and rho_q = 0.
/// Near that endpoint, pushing rho_q down to delta costs rho_u ~ log(1/delta);
/// the curve's last rows show that growth.
std::vector<TradeoffPoint> tradeoff_curve(Angle theta, std::size_t num_points, Regime regime,
                                          std::optional<Density> density = std::nullopt);

struct PlanParams {
  Regime regime = Regime::sparse;
  double log_n = 0.0;
  std::size_t d = 0;
  Angle theta;
  double beta = 1.0;
  double alpha_q = 0.0;
  double alpha_u = 0.0;
  double kappa = 4.0;
  double t_requested = 1.0;  // ceil(kappa / W(alpha_q, alpha_u, theta))
  std::size_t m = 1;
  std::uint64_t b = 1;       // per-block code size, b^m >= t_requested
  double t_actual = 1.0;     // b^m
  double rho_q = 0.0;
  double rho_u = 0.0;
  double log_wedge_near = 0.0;  // per-dimension log W(alpha_q, alpha_u, theta)

  double n() const;
};

struct PlanRequest {
  Regime regime = Regime::sparse;
  double n = 0.0;            // ignored for the critical regime
  std::size_t d = 0;
  Angle theta;
  double beta = 1.0;
  double kappa = 4.0;
  std::optional<std::size_t> m;
};

/// Sparse plan: alpha_u = sqrt((n^{2/d} - 1) / n^{2/d}), alpha_q = beta alpha_u.
PlanParams sparse_params(double n, std::size_t d, Angle theta, double beta, double kappa,
                         std::optional<std::size_t> m = std::nullopt);
PlanParams dense_params(double n, std::size_t d, Angle theta, double beta, double kappa,
                        std::optional<std::size_t> m = std::nullopt);
/// n = (1/sin theta)^d, alpha_u = cos theta.
PlanParams critical_params(std::size_t d, Angle theta, double beta, double kappa,
                           std::optional<std::size_t> m = std::nullopt);

PlanParams plan(const PlanRequest& request);

/// Smallest b with b^m >= t.
std::uint64_t block_code_size(double t, std::size_t m);

}  // namespace sphf
