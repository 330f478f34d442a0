#include "sphf/oracle.hpp"

#include <stdexcept>
#include <string>

namespace sphf {

Neighbor linear_nn(std::span<const UnitVector> dataset, const UnitVector& q) {
  if (dataset.empty()) throw std::invalid_argument("nearest neighbor of an empty dataset");
  Neighbor best{0, angle_between(dataset[0], q)};
  for (std::size_t i = 1; i < dataset.size(); ++i) {
    const Angle a = angle_between(dataset[i], q);
    if (a < best.angle) best = {i, a};
  }
  return best;
}

std::vector<CodeIndex> brute_decode(const ProductCode& code, std::span<const double> target,
                                    ScoreInterval interval, std::uint64_t cap) {
  if (code.size() > cap) {
    throw std::invalid_argument("brute-force decoding of " + std::to_string(code.size()) +
                                " code words exceeds the cap of " + std::to_string(cap));
  }
  const auto raw = code.raw_block_scores(target);
  std::vector<CodeIndex> out;
  for (std::uint64_t i = 0; i < code.size(); ++i) {
    if (interval.contains(codeword_score(code, raw, CodeIndex{i}))) out.push_back(CodeIndex{i});
  }
  return out;
}

std::vector<CodeIndex> brute_decode(const ProductCode& code, std::span<const double> target,
                                    double alpha_low, double alpha_high, std::uint64_t cap) {
  return brute_decode(code, target, ScoreInterval::half_open(alpha_low, alpha_high), cap);
}

}  // namespace sphf
