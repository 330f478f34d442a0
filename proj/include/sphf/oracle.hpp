#pragma once

// Brute-force references used as ground truth in tests and benchmarks.

#include <cstdint>
#include <span>
#include <vector>

#include "sphf/decoder.hpp"
#include "sphf/filter_index.hpp"
#include "sphf/geometry.hpp"
#include "sphf/product_code.hpp"

namespace sphf {

inline constexpr std::uint64_t kBruteDecodeCap = std::uint64_t{1} << 20;

/// Closest point by linear scan; ties go to the smallest id. Throws on an
/// empty dataset.
Neighbor linear_nn(std::span<const UnitVector> dataset, const UnitVector& q);

/// Every code word whose canonical score lies in `interval`, by full
/// enumeration. Throws when the code has more than `cap` words.
std::vector<CodeIndex> brute_decode(const ProductCode& code, std::span<const double> target,
                                    ScoreInterval interval, std::uint64_t cap = kBruteDecodeCap);

/// (alpha_low, alpha_high] convenience overload.
std::vector<CodeIndex> brute_decode(const ProductCode& code, std::span<const double> target,
                                    double alpha_low, double alpha_high,
                                    std::uint64_t cap = kBruteDecodeCap);

}  // namespace sphf
