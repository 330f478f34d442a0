#pragma once

// Planted random instances on the sphere and density reduction.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sphf/filter_index.hpp"
#include "sphf/geometry.hpp"

namespace sphf {

enum class Model { sparse, dense };

struct InstanceSpec {
  Model model = Model::sparse;
  std::size_t n = 1;
  std::size_t d = 2;
  Angle theta{kPi / 3};  // near (planted) angle
  Angle psi{kPi / 2};    // far angle; pi/2 in the sparse model
  bool planted = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Instance {
  std::vector<UnitVector> dataset;
  UnitVector query;
  std::optional<PointId> planted_id;  // index into dataset
};

/// n uniform points and a uniform query. With `planted`, one uniformly chosen
/// point is replaced by cos(theta) q + sin(theta) r, r uniform on the
/// subsphere orthogonal to q. Both models draw points the same way; the sparse
/// model relies on concentration to keep other points near-orthogonal.
Instance generate(const InstanceSpec& spec);

enum class ReductionMode {
  honest,     // planted point kept only if the subsample happens to include it
  benchmark,  // planted point always kept
};

/// Target size ceil(multiplier * (1/sin theta)^d), computed in the log domain.
std::size_t reduced_size(Angle theta, std::size_t d, double multiplier);

/// Uniform subset of size reduced_size(...), in an order drawn from `seed`.
/// Throws std::invalid_argument when the target exceeds the dataset size.
Instance reduce_density(const Instance& instance, Angle theta, double multiplier,
                        std::uint64_t seed, ReductionMode mode = ReductionMode::benchmark);

}  // namespace sphf
