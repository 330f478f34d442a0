#include "sphf/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace sphf {

void InstanceSpec::validate() const {
  if (n < 1) throw std::invalid_argument("instance needs at least one point");
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  if (!(theta.radians() > 0.0 && theta < psi && psi.radians() <= kPi / 2)) {
    throw std::invalid_argument("need 0 < theta < psi <= pi/2");
  }
  if (model == Model::sparse && psi.radians() != kPi / 2) {
    throw std::invalid_argument("the sparse model fixes psi = pi/2");
  }
}

Instance generate(const InstanceSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  UnitVector query = random_unit_vector(spec.d, rng);
  std::vector<UnitVector> data;
  data.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) data.push_back(random_unit_vector(spec.d, rng));

  std::optional<PointId> planted;
  if (spec.planted) {
    const PointId id = std::uniform_int_distribution<PointId>(0, spec.n - 1)(rng);
    // r: uniform on the great subsphere orthogonal to the query.
    std::vector<double> r;
    double rn = 0.0;
    while (!(rn > 1e-6)) {
      const UnitVector g = random_unit_vector(spec.d, rng);
      r.assign(g.coords().begin(), g.coords().end());
      const double along = dot(r, query.coords());
      for (std::size_t i = 0; i < spec.d; ++i) r[i] -= along * query[i];
      rn = norm(r);
    }
    const double c = spec.theta.cos();
    const double s = spec.theta.sin();
    std::vector<double> p(spec.d);
    for (std::size_t i = 0; i < spec.d; ++i) p[i] = c * query[i] + s * r[i] / rn;
    data[id] = UnitVector::normalize(std::move(p));
    planted = id;
  }
  return {std::move(data), std::move(query), planted};
}

std::size_t reduced_size(Angle theta, std::size_t d, double multiplier) {
  if (!(multiplier > 0.0)) throw std::invalid_argument("multiplier must be positive");
  if (!(theta.radians() > 0.0 && theta.radians() <= kPi / 2)) {
    throw std::invalid_argument("near angle must lie in (0, pi/2]");
  }
  const double log_target = std::log(multiplier) - static_cast<double>(d) * std::log(theta.sin());
  if (log_target > 62.0 * std::log(2.0)) {
    throw std::invalid_argument("reduced size overflows (log size " + std::to_string(log_target) +
                                ")");
  }
  // Round before ceil so that exact powers like 2^10 are not bumped by drift.
  const double target = std::exp(log_target);
  const double rounded = std::round(target);
  return static_cast<std::size_t>(std::abs(target - rounded) < 1e-9 * rounded ? rounded
                                                                              : std::ceil(target));
}

Instance reduce_density(const Instance& instance, Angle theta, double multiplier,
                        std::uint64_t seed, ReductionMode mode) {
  const std::size_t n = instance.dataset.size();
  const std::size_t d = instance.query.dim();
  const std::size_t target = reduced_size(theta, d, multiplier);
  if (target > n) {
    throw std::invalid_argument("reduction not applicable: target size " + std::to_string(target) +
                                " exceeds dataset size " + std::to_string(n));
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `target` slots are a uniform random subset
  // in uniform random order.
  for (std::size_t i = 0; i < target; ++i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(i, n - 1)(rng);
    std::swap(order[i], order[j]);
  }
  order.resize(target);

  std::optional<PointId> planted;
  if (instance.planted_id) {
    const auto it = std::find(order.begin(), order.end(), *instance.planted_id);
    if (it != order.end()) {
      planted = static_cast<PointId>(it - order.begin());
    } else if (mode == ReductionMode::benchmark) {
      const std::size_t slot = std::uniform_int_distribution<std::size_t>(0, target - 1)(rng);
      order[slot] = *instance.planted_id;
      planted = slot;
    }
  }

  Instance out{{}, instance.query, planted};
  out.dataset.reserve(target);
  for (std::size_t i : order) out.dataset.push_back(instance.dataset[i]);
  return out;
}

}  // namespace sphf
