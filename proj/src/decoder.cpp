#include "sphf/decoder.hpp"

#include <stdexcept>

namespace sphf {

PruningBounds::PruningBounds(const BlockScores& scores)
    : suffix_max(scores.blocks(), 0.0), suffix_min(scores.blocks(), 0.0) {
  const std::size_t m = scores.blocks();
  for (std::size_t k = m; k-- > 1;) {
    const auto d = scores.scores(k);
    suffix_max[k - 1] = suffix_max[k] + d.front();
    suffix_min[k - 1] = suffix_min[k] + d.back();
  }
}

std::vector<CodeIndex> decode(const ProductCode& code, const BlockScores& scores,
                              const PruningBounds& bounds, ScoreInterval interval) {
  std::vector<CodeIndex> out;
  enumerate_interval(code, scores, bounds, interval,
                     [&](CodeIndex idx, double) { out.push_back(idx); });
  return out;
}

std::vector<CodeIndex> decode_above(const ProductCode& code, std::span<const double> target,
                                    double alpha) {
  const BlockScores scores(code, target);
  return decode(code, scores, PruningBounds(scores), ScoreInterval::above(alpha));
}

std::vector<CodeIndex> decode_interval(const ProductCode& code, std::span<const double> target,
                                       double alpha_low, double alpha_high) {
  if (!(alpha_low < alpha_high)) throw std::invalid_argument("empty decoding interval");
  const BlockScores scores(code, target);
  return decode(code, scores, PruningBounds(scores),
                ScoreInterval::half_open(alpha_low, alpha_high));
}

DecodeStats decode_cost(const ProductCode& code, std::span<const double> target,
                        double alpha_low, double alpha_high) {
  if (!(alpha_low < alpha_high)) throw std::invalid_argument("empty decoding interval");
  const BlockScores scores(code, target);
  return enumerate_interval(code, scores, PruningBounds(scores),
                            ScoreInterval::half_open(alpha_low, alpha_high),
                            [](CodeIndex, double) {});
}

}  // namespace sphf
