#include "sphf/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sphf {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::sparse: return "sparse";
    case Regime::dense: return "dense";
    case Regime::critical: return "critical";
  }
  return "?";
}

Regime parse_regime(const std::string& s) {
  if (s == "sparse") return Regime::sparse;
  if (s == "dense") return Regime::dense;
  if (s == "critical") return Regime::critical;
  throw std::invalid_argument("unknown regime '" + s + "' (expected sparse, dense or critical)");
}

namespace {

void check_acute(Angle theta) {
  if (!(theta.radians() > 0.0 && theta.radians() < kPi / 2)) {
    throw std::invalid_argument("near angle must lie strictly between 0 and pi/2");
  }
}

// sin^2 theta and -ln(sin^2 theta), accurate near both ends of (0, pi/2].
double sin_squared(Angle theta) {
  const double c = theta.cos(), s = theta.sin();
  return c < s ? 1.0 - c * c : s * s;
}

double neg_log_sin_squared(Angle theta) {
  const double c = theta.cos(), s = theta.sin();
  return c < s ? -std::log1p(-c * c) : -2.0 * std::log(s);
}

}  // namespace

Angle theta_from_c(double c) {
  if (!(c > 1.0)) throw std::invalid_argument("approximation factor c must be > 1");
  // 1 - cos theta = 1/c^2 = 2 sin^2(theta/2)
  return Angle(2.0 * std::asin(1.0 / (std::sqrt(2.0) * c)));
}

double c_from_theta(Angle theta) {
  check_acute(theta);
  return 1.0 / (std::sqrt(2.0) * std::sin(0.5 * theta.radians()));
}

void check_beta_range(Angle theta, double beta) {
  check_acute(theta);
  const double lo = theta.cos();
  const double hi = 1.0 / theta.cos();
  constexpr double slack = 1e-12;
  if (!(beta >= lo * (1.0 - slack) && beta <= hi * (1.0 + slack))) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "beta = " << beta << " outside the optimal range [cos theta, 1/cos theta] = [" << lo
        << ", " << hi << "]";
    throw std::invalid_argument(msg.str());
  }
}

Exponents sparse_exponents(Angle theta, double beta) {
  check_beta_range(theta, beta);
  const double c = theta.cos();
  const double s = theta.sin();
  const double h = std::sin(0.5 * theta.radians());
  const double one_minus_c = 2.0 * h * h;
  const double q = (one_minus_c + c * (1.0 - beta)) / s;
  const double u = ((beta - 1.0) + one_minus_c) / s;
  return {q * q, u * u};
}

double beta_for_target(Angle theta, Target target, double value) {
  check_acute(theta);
  if (!(value >= 0.0)) throw std::invalid_argument("target exponent must be non-negative");
  const double c = theta.cos();
  const double s = theta.sin();
  const double beta = target == Target::rho_q ? (1.0 - std::sqrt(value) * s) / c
                                              : c + std::sqrt(value) * s;
  check_beta_range(theta, beta);
  return beta;
}

SparseCostExponents sparse_cost_exponents(double beta, Angle theta) {
  const double c = theta.cos();
  const double s = theta.sin();
  SparseCostExponents e;
  e.cap_query = -beta * beta;
  e.cap_update = -1.0;
  e.wedge_near = -(1.0 + beta * beta - 2.0 * beta * c) / (s * s);
  e.wedge_far = -1.0 - beta * beta;
  return e;
}

Density Density::of_count(double n, std::size_t d) {
  if (!(n >= 1.0)) throw std::invalid_argument("dataset size must be >= 1");
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  return {std::log(n), d};
}

Density Density::from_growth_excess(double excess, std::size_t d) {
  if (!(excess > -1.0)) throw std::invalid_argument("growth excess must be > -1");
  return {0.5 * static_cast<double>(d) * std::log1p(excess), d};
}

double Density::one_minus_inverse_growth() const { return -std::expm1(-log_growth()); }

double Density::n() const { return std::exp(log_n); }

Exponents dense_exponents(Density density, Angle theta, double beta) {
  check_beta_range(theta, beta);
  const double lg = density.log_growth();
  if (!(lg > 0.0)) throw std::invalid_argument("dense exponents need n^{2/d} > 1");
  const double c = theta.cos();
  const double s2 = sin_squared(theta);
  const double x = density.one_minus_inverse_growth();
  const double dev = beta - c;
  // 1 + wedge_arg = ((1 - x) s^2 - x (beta - c)^2) / s^2
  const double wedge_arg = -x * (1.0 + dev * dev / s2);
  const double cap_arg = -x * beta * beta;
  if (!(wedge_arg > -1.0) || !(cap_arg > -1.0)) {
    throw std::domain_error("non-positive logarithm argument: update cost diverges at beta = " +
                            std::to_string(beta) + " for this density");
  }
  const double log_w =
      wedge_arg > -0.5
          ? std::log1p(wedge_arg)
          : std::log(std::exp(-lg) * s2 - x * dev * dev) + neg_log_sin_squared(theta);
  const double log_c = std::log1p(cap_arg);
  return {(-log_w + log_c) / lg, -log_w / lg - 1.0};
}

Exponents critical_exponents(Angle theta, double beta) {
  check_beta_range(theta, beta);
  const double c = theta.cos();
  const double s2 = sin_squared(theta);
  const double shift = c * (beta - c);
  // s^2 (1 + beta c) / (beta c - cos 2 theta) = 1 + c^2 (1 - beta c) / (s^2 + shift)
  const double q_den = s2 + shift;
  // 1 - cot^2 (beta^2 - 2 beta c + 1) = (s^2 - shift)(s^2 + shift) / s^4
  const double u_low = s2 - shift;
  if (!(q_den > 0.0) || !(u_low > 0.0)) {
    throw std::domain_error("critical exponents diverge at beta = " + std::to_string(beta));
  }
  const double scale = neg_log_sin_squared(theta);
  const double rho_q = std::log1p(c * c * (1.0 - beta * c) / q_den) / scale;
  const double rho_u = (-std::log(u_low) - std::log(q_den) - 2.0 * scale) / scale;
  return {rho_q, rho_u};
}

CriticalDensity critical_density(Angle theta, std::size_t d) {
  if (!(theta.radians() > 0.0 && theta.radians() <= kPi / 2)) {
    throw std::invalid_argument("near angle must lie in (0, pi/2]");
  }
  CriticalDensity out;
  out.log_n = 0.5 * static_cast<double>(d) * neg_log_sin_squared(theta);
  // 2^62 keeps the rounded value exactly representable.
  if (out.log_n < 62.0 * std::log(2.0)) {
    out.n = static_cast<std::uint64_t>(std::llround(std::exp(out.log_n)));
  }
  return out;
}

std::vector<TradeoffPoint> tradeoff_curve(Angle theta, std::size_t num_points, Regime regime,
                                          std::optional<Density> density) {
  if (num_points < 2) throw std::invalid_argument("a curve needs at least two points");
  check_acute(theta);
  if (regime == Regime::dense && !density) {
    throw std::invalid_argument("dense tradeoff curve needs a density");
  }
  const double lo = theta.cos();
  const double hi = 1.0 / theta.cos();
  const double c = c_from_theta(theta);
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<TradeoffPoint> out;
  out.reserve(num_points);
  for (std::size_t i = 0; i < num_points; ++i) {
    TradeoffPoint p;
    p.beta = i + 1 == num_points
                 ? hi
                 : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(num_points - 1);
    p.c = c;
    Exponents e;
    switch (regime) {
      case Regime::sparse:
        e = sparse_exponents(theta, p.beta);
        break;
      case Regime::dense:
        try {
          e = dense_exponents(*density, theta, p.beta);
        } catch (const std::domain_error&) {
          e = {inf, inf};
        }
        break;
      case Regime::critical:
        if (i + 1 == num_points) {
          e = {0.0, inf};
        } else {
          e = critical_exponents(theta, p.beta);
        }
        break;
    }
    p.rho_q = e.rho_q;
    p.rho_u = e.rho_u;
    out.push_back(p);
  }
  return out;
}

std::uint64_t block_code_size(double t, std::size_t m) {
  if (m == 0) throw std::invalid_argument("block count must be >= 1");
  if (!(t > 1.0)) return 1;
  if (!std::isfinite(t)) throw std::invalid_argument("filter count is not finite");
  const long double target = t;
  auto power = [m](std::uint64_t b) {
    return std::pow(static_cast<long double>(b), static_cast<long double>(m));
  };
  auto b = static_cast<std::uint64_t>(std::ceil(std::exp(std::log(t) / static_cast<double>(m))));
  b = std::max<std::uint64_t>(b, 1);
  while (b > 1 && power(b - 1) >= target) --b;
  while (power(b) < target) ++b;
  return b;
}

double PlanParams::n() const { return std::exp(log_n); }

namespace {

PlanParams finish_plan(PlanParams p, std::optional<std::size_t> m) {
  const double log_one_minus = -std::expm1(-2.0 * p.log_n / static_cast<double>(p.d));
  p.alpha_u = std::sqrt(log_one_minus);
  p.alpha_q = p.beta * p.alpha_u;
  if (!(p.alpha_q < 1.0) || !(p.alpha_u < 1.0)) {
    throw std::invalid_argument("alpha_q = " + std::to_string(p.alpha_q) +
                                " >= 1: beta too large for this n and d");
  }
  p.log_wedge_near = wedge_log_volume(p.alpha_q, p.alpha_u, p.theta);
  p.t_requested = std::ceil(p.kappa * std::exp(-static_cast<double>(p.d) * p.log_wedge_near));
  p.m = m ? *m : default_m(p.d);
  if (p.m < 1) throw std::invalid_argument("block count must be >= 1");
  p.b = block_code_size(p.t_requested, p.m);
  p.t_actual = static_cast<double>(
      std::pow(static_cast<long double>(p.b), static_cast<long double>(p.m)));
  return p;
}

PlanParams start_plan(Regime regime, double log_n, std::size_t d, Angle theta, double beta,
                      double kappa) {
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  check_beta_range(theta, beta);
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  PlanParams p;
  p.regime = regime;
  p.log_n = log_n;
  p.d = d;
  p.theta = theta;
  p.beta = beta;
  p.kappa = kappa;
  return p;
}

}  // namespace

PlanParams sparse_params(double n, std::size_t d, Angle theta, double beta, double kappa,
                         std::optional<std::size_t> m) {
  if (!(n >= 2.0)) throw std::invalid_argument("dataset size must be >= 2");
  PlanParams p = start_plan(Regime::sparse, std::log(n), d, theta, beta, kappa);
  const Exponents e = sparse_exponents(theta, beta);
  p.rho_q = e.rho_q;
  p.rho_u = e.rho_u;
  return finish_plan(p, m);
}

PlanParams dense_params(double n, std::size_t d, Angle theta, double beta, double kappa,
                        std::optional<std::size_t> m) {
  if (!(n >= 2.0)) throw std::invalid_argument("dataset size must be >= 2");
  PlanParams p = start_plan(Regime::dense, std::log(n), d, theta, beta, kappa);
  const Exponents e = dense_exponents(Density{p.log_n, d}, theta, beta);
  p.rho_q = e.rho_q;
  p.rho_u = e.rho_u;
  return finish_plan(p, m);
}

PlanParams critical_params(std::size_t d, Angle theta, double beta, double kappa,
                           std::optional<std::size_t> m) {
  check_acute(theta);
  PlanParams p =
      start_plan(Regime::critical, critical_density(theta, d).log_n, d, theta, beta, kappa);
  const Exponents e = critical_exponents(theta, beta);
  p.rho_q = e.rho_q;
  p.rho_u = e.rho_u;
  return finish_plan(p, m);
}

PlanParams plan(const PlanRequest& r) {
  switch (r.regime) {
    case Regime::sparse: return sparse_params(r.n, r.d, r.theta, r.beta, r.kappa, r.m);
    case Regime::dense: return dense_params(r.n, r.d, r.theta, r.beta, r.kappa, r.m);
    case Regime::critical: return critical_params(r.d, r.theta, r.beta, r.kappa, r.m);
  }
  throw std::invalid_argument("unknown regime");
}

}  // namespace sphf
