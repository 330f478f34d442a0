#pragma once

// Index persistence. The file stores a format version, the code quadruple
// (d, m, b, seed), the plan and the point set; buckets are rebuilt on load.

#include <cstdint>
#include <filesystem>

#include "sphf/filter_index.hpp"

namespace sphf {

inline constexpr std::uint32_t kIndexFileVersion = 1;

/// Throws std::runtime_error on I/O failure.
void save_index(const std::filesystem::path& path, const FilterIndex& index);

/// Throws std::runtime_error on a missing or malformed file. The loaded index
/// starts with zeroed counters.
FilterIndex load_index(const std::filesystem::path& path);

}  // namespace sphf
