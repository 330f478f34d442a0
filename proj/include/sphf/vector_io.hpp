#pragma once

// Vector files.
//
// Binary layout, little-endian: the magic bytes "SPHF", u32 version (1),
// u32 count, u32 dim, then count * dim binary32 values in row-major order.
// Small inputs may instead be CSV, one vector per line. Readers detect the
// format from the first four bytes and normalize every vector to unit length.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sphf/geometry.hpp"

namespace sphf {

inline constexpr std::uint32_t kVectorFileVersion = 1;

/// Throws std::runtime_error on I/O failure.
void write_vectors(const std::filesystem::path& path, std::span<const UnitVector> vectors);
void write_vectors_csv(const std::filesystem::path& path, std::span<const UnitVector> vectors);

/// Reads either format. Throws std::runtime_error on a missing file, bad magic
/// or version, truncation, ragged CSV rows, or a zero vector.
std::vector<UnitVector> read_vectors(const std::filesystem::path& path);

}  // namespace sphf
