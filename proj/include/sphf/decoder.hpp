#pragma once

// Output-sensitive list decoding of a product code.
//
// Code words are enumerated depth-first, one block per level, over the
// blockwise scores sorted in decreasing order. A node at level k with partial
// score s is worth expanding only if the best completion can still clear the
// lower bound (s + suffix_max_k) and the worst completion can still stay under
// the upper bound (s + suffix_min_k). Both conditions are monotone in the next
// block's score, so the live children of every node form one contiguous run of
// the sorted list, located with two binary searches.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <type_traits>
#include <vector>

#include "sphf/geometry.hpp"
#include "sphf/product_code.hpp"

namespace sphf {

/// Score interval. The upper end is always closed; the lower end is open
/// unless `low_closed` is set.
struct ScoreInterval {
  double low = -std::numeric_limits<double>::infinity();
  double high = std::numeric_limits<double>::infinity();
  bool low_closed = false;

  static ScoreInterval above(double alpha) {
    return {alpha, std::numeric_limits<double>::infinity(), true};
  }
  static ScoreInterval half_open(double low, double high) { return {low, high, false}; }

  bool contains(double score) const {
    return (low_closed ? score >= low : score > low) && score <= high;
  }
};

/// suffix_max[k] = sum_{i>k} max_j d_{i,j}, suffix_min likewise; both 0 at the
/// last level.
struct PruningBounds {
  std::vector<double> suffix_max;
  std::vector<double> suffix_min;

  explicit PruningBounds(const BlockScores& scores);
};

struct DecodeStats {
  std::uint64_t visited = 0;  // root, internal nodes and leaves entered
  std::uint64_t emitted = 0;
};

namespace detail {
// Internal levels use a slightly widened test so that rounding in the suffix
// sums can never prune a subtree holding a solution; leaves compare exactly.
inline constexpr double kPruneSlack = 1e-10;
}  // namespace detail

/// Calls visit(CodeIndex, score) for every code word whose canonical score
/// lies in `interval`, in depth-first order. A visitor returning bool stops the
/// enumeration by returning false.
template <class Visit>
DecodeStats enumerate_interval(const ProductCode& code, const BlockScores& scores,
                               const PruningBounds& bounds, ScoreInterval interval,
                               Visit&& visit) {
  const std::size_t m = scores.blocks();
  DecodeStats stats;
  stats.visited = 1;

  std::vector<double> partial(m + 1, 0.0);
  std::vector<std::uint64_t> packed(m + 1, 0);
  std::vector<std::size_t> next(m, 0);
  std::vector<std::size_t> end(m, 0);

  auto live_range = [&](std::size_t k) {
    const auto d = scores.scores(k);
    const double s = partial[k];
    const bool leaf = k + 1 == m;
    const double slack = leaf ? 0.0 : detail::kPruneSlack;
    const double smax = bounds.suffix_max[k];
    const double smin = bounds.suffix_min[k];
    // Prefix of ranks whose best completion clears the lower bound.
    const auto hi = std::partition_point(d.begin(), d.end(), [&](double x) {
      const double best = (s + x) + smax;
      if (leaf) return interval.low_closed ? best >= interval.low : best > interval.low;
      return best >= interval.low - slack;
    });
    // Suffix of ranks whose worst completion stays under the upper bound.
    const auto lo = std::partition_point(d.begin(), hi, [&](double x) {
      return !((s + x) + smin <= interval.high + slack);
    });
    next[k] = static_cast<std::size_t>(lo - d.begin());
    end[k] = static_cast<std::size_t>(hi - d.begin());
  };

  live_range(0);
  std::size_t k = 0;
  for (;;) {
    if (next[k] < end[k]) {
      const std::size_t r = next[k]++;
      ++stats.visited;
      const double s = partial[k] + scores.scores(k)[r];
      const std::uint64_t p = packed[k] + scores.ids(k)[r] * code.stride(k);
      if (k + 1 == m) {
        ++stats.emitted;
        if constexpr (std::is_same_v<std::invoke_result_t<Visit&, CodeIndex, double>, bool>) {
          if (!visit(CodeIndex{p}, s)) return stats;
        } else {
          visit(CodeIndex{p}, s);
        }
      } else {
        partial[k + 1] = s;
        packed[k + 1] = p;
        ++k;
        live_range(k);
      }
    } else {
      if (k == 0) break;
      --k;
    }
  }
  return stats;
}

/// { idx : score(idx) >= alpha }.
std::vector<CodeIndex> decode_above(const ProductCode& code, std::span<const double> target,
                                    double alpha);

/// { idx : alpha_low < score(idx) <= alpha_high }. Requires alpha_low < alpha_high.
std::vector<CodeIndex> decode_interval(const ProductCode& code, std::span<const double> target,
                                       double alpha_low, double alpha_high);

/// Node and output counts of one decode_interval pass.
DecodeStats decode_cost(const ProductCode& code, std::span<const double> target,
                        double alpha_low, double alpha_high);

/// Decoding against precomputed scores, for callers that reuse one sort
/// across several intervals.
std::vector<CodeIndex> decode(const ProductCode& code, const BlockScores& scores,
                              const PruningBounds& bounds, ScoreInterval interval);

}  // namespace sphf
