#pragma once

// Little-endian primitive encoding shared by the vector and index formats.

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sphf::detail {

template <class U>
void write_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xffu);
  }
  out.write(bytes.data(), bytes.size());
}

template <class U>
U read_le(std::istream& in, const std::string& what) {
  std::array<char, sizeof(U)> bytes;
  if (!in.read(bytes.data(), bytes.size())) {
    throw std::runtime_error("truncated file while reading " + what);
  }
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    value |= static_cast<U>(static_cast<unsigned char>(bytes[i])) << (8 * i);
  }
  return value;
}

inline void write_f32(std::ostream& out, float x) { write_le(out, std::bit_cast<std::uint32_t>(x)); }
inline void write_f64(std::ostream& out, double x) { write_le(out, std::bit_cast<std::uint64_t>(x)); }

inline float read_f32(std::istream& in, const std::string& what) {
  return std::bit_cast<float>(read_le<std::uint32_t>(in, what));
}
inline double read_f64(std::istream& in, const std::string& what) {
  return std::bit_cast<double>(read_le<std::uint64_t>(in, what));
}

}  // namespace sphf::detail
