#include "sphf/vector_io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "binary_io.hpp"

namespace sphf {
namespace {

constexpr char kMagic[4] = {'S', 'P', 'H', 'F'};

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

UnitVector to_unit(std::vector<double> coords, std::size_t row) {
  try {
    return UnitVector::normalize(std::move(coords));
  } catch (const std::exception& e) {
    throw std::runtime_error("vector " + std::to_string(row) + ": " + e.what());
  }
}

std::vector<UnitVector> read_binary(std::istream& in) {
  const auto version = detail::read_le<std::uint32_t>(in, "version");
  if (version != kVectorFileVersion) {
    throw std::runtime_error("unsupported vector file version " + std::to_string(version));
  }
  const auto count = detail::read_le<std::uint32_t>(in, "count");
  const auto dim = detail::read_le<std::uint32_t>(in, "dim");
  std::vector<UnitVector> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::vector<double> coords(dim);
    for (auto& x : coords) x = detail::read_f32(in, "vector body");
    out.push_back(to_unit(std::move(coords), i));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error("trailing bytes after vector body");
  }
  return out;
}

std::vector<UnitVector> read_csv(std::istream& in) {
  std::vector<UnitVector> out;
  std::string line;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> coords;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const auto b = field.find_first_not_of(" \t\r");
      const auto e = field.find_last_not_of(" \t\r");
      if (b == std::string::npos) throw std::runtime_error("empty CSV field");
      double x = 0.0;
      const char* first = field.data() + b;
      const char* last = field.data() + e + 1;
      const auto [ptr, ec] = std::from_chars(first, last, x);
      if (ec != std::errc() || ptr != last) {
        throw std::runtime_error("bad CSV number '" + field.substr(b, e - b + 1) + "'");
      }
      coords.push_back(x);
    }
    if (dim == 0) dim = coords.size();
    if (coords.size() != dim) {
      throw std::runtime_error("CSV row " + std::to_string(out.size()) + " has " +
                               std::to_string(coords.size()) + " values, expected " +
                               std::to_string(dim));
    }
    out.push_back(to_unit(std::move(coords), out.size()));
  }
  return out;
}

}  // namespace

void write_vectors(const std::filesystem::path& path, std::span<const UnitVector> vectors) {
  const std::size_t dim = vectors.empty() ? 0 : vectors.front().dim();
  if (vectors.size() > std::numeric_limits<std::uint32_t>::max() ||
      dim > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("vector set too large for the file format");
  }
  auto out = open_out(path);
  out.write(kMagic, sizeof kMagic);
  detail::write_le<std::uint32_t>(out, kVectorFileVersion);
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(vectors.size()));
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(dim));
  for (const auto& v : vectors) {
    if (v.dim() != dim) throw std::invalid_argument("vectors have mixed dimensions");
    for (double x : v.coords()) detail::write_f32(out, static_cast<float>(x));
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_vectors_csv(const std::filesystem::path& path, std::span<const UnitVector> vectors) {
  auto out = open_out(path);
  out.precision(17);
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < v.dim(); ++i) out << (i ? "," : "") << v[i];
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<UnitVector> read_vectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char head[4] = {};
  in.read(head, sizeof head);
  if (in.gcount() == 4 && std::equal(head, head + 4, kMagic)) return read_binary(in);
  in.clear();
  in.seekg(0);
  return read_csv(in);
}

}  // namespace sphf
