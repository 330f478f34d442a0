#pragma once

// Product code C = C_1 x ... x C_m: each of m coordinate blocks gets b random
// unit vectors, and a code word concatenates one vector per block, scaled by
// 1/sqrt(m). The code has b^m words but is described by m*b block vectors.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sphf/geometry.hpp"

namespace sphf {

/// Block count for dimension d: ceil(ln^2 d) clamped to [1, d].
std::size_t default_m(std::size_t d);

/// Code word position in mixed radix: sum_k digit_k * b^k.
struct CodeIndex {
  std::uint64_t packed = 0;

  friend bool operator==(CodeIndex, CodeIndex) = default;
  friend auto operator<=>(CodeIndex, CodeIndex) = default;
};

struct CodeIndexHash {
  std::size_t operator()(CodeIndex i) const noexcept {
    return std::hash<std::uint64_t>{}(i.packed * 0x9e3779b97f4a7c15ULL);
  }
};

class ProductCode {
 public:
  /// The (d, m, b, seed) quadruple fully determines the code.
  ProductCode(std::size_t d, std::size_t m, std::uint64_t b, std::uint64_t seed);

  /// Code with b = ceil(t_min^{1/m}) words per block, so b^m >= t_min.
  static ProductCode sample(std::size_t d, double t_min, std::size_t m, std::uint64_t seed);

  std::size_t dim() const { return d_; }
  std::size_t padded_dim() const { return d_pad_; }
  std::size_t blocks() const { return m_; }
  std::size_t block_dim() const { return block_dim_; }
  std::uint64_t block_size() const { return b_; }
  std::uint64_t size() const { return size_; }
  std::uint64_t seed() const { return seed_; }

  /// Unscaled unit vector j of block k.
  std::span<const double> subcode_vector(std::size_t k, std::uint64_t j) const;

  std::vector<std::uint32_t> digits(CodeIndex idx) const;
  CodeIndex pack(std::span<const std::uint32_t> digits) const;
  /// b^k, the packed stride of block k.
  std::uint64_t stride(std::size_t k) const { return strides_[k]; }

  /// The unit code word (1/sqrt m)(c_1, ..., c_m) in R^{padded_dim}.
  std::vector<double> codeword(CodeIndex idx) const;

  /// Row-major m x b table of <c_{k,j}, target_k> / sqrt(m). Targets shorter
  /// than padded_dim are zero-padded.
  std::vector<double> raw_block_scores(std::span<const double> target) const;

 private:
  std::size_t d_;
  std::size_t m_;
  std::size_t d_pad_;
  std::size_t block_dim_;
  std::uint64_t b_;
  std::uint64_t size_;
  std::uint64_t seed_;
  std::vector<std::uint64_t> strides_;
  std::vector<double> vectors_;  // [k][j][block_dim]
};

/// Per-block scores sorted by decreasing value; ties broken by ascending index.
class BlockScores {
 public:
  BlockScores(const ProductCode& code, std::span<const double> target);

  std::size_t blocks() const { return m_; }
  std::uint64_t block_size() const { return b_; }

  std::span<const double> scores(std::size_t k) const {
    return {scores_.data() + k * b_, static_cast<std::size_t>(b_)};
  }
  std::span<const std::uint32_t> ids(std::size_t k) const {
    return {ids_.data() + k * b_, static_cast<std::size_t>(b_)};
  }

 private:
  std::size_t m_;
  std::uint64_t b_;
  std::vector<double> scores_;
  std::vector<std::uint32_t> ids_;
};

/// Canonical score of a code word against a raw score table: the left-to-right
/// sum of its block scores. Decoders and oracles compare this exact value.
double codeword_score(const ProductCode& code, std::span<const double> raw_scores,
                      CodeIndex idx);

}  // namespace sphf
