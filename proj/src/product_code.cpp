#include "sphf/product_code.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "sphf/planner.hpp"

namespace sphf {

std::size_t default_m(std::size_t d) {
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  const double l = std::log(static_cast<double>(d));
  const auto m = static_cast<std::size_t>(std::ceil(l * l));
  return std::clamp<std::size_t>(m, 1, d);
}

ProductCode::ProductCode(std::size_t d, std::size_t m, std::uint64_t b, std::uint64_t seed)
    : d_(d), m_(m), b_(b), seed_(seed) {
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  if (m < 1) throw std::invalid_argument("block count must be >= 1");
  if (m > d) throw std::invalid_argument("block count exceeds the dimension");
  if (b < 1) throw std::invalid_argument("block code size must be >= 1");
  if (b > (std::uint64_t{1} << 31)) throw std::invalid_argument("block code size too large");
  d_pad_ = (d + m - 1) / m * m;
  block_dim_ = d_pad_ / m;

  strides_.resize(m);
  std::uint64_t stride = 1;
  constexpr std::uint64_t limit = std::uint64_t{1} << 62;
  for (std::size_t k = 0; k < m; ++k) {
    strides_[k] = stride;
    if (stride > limit / b) {
      throw std::invalid_argument("code size b^m = " + std::to_string(b) + "^" +
                                  std::to_string(m) + " exceeds 2^62");
    }
    stride *= b;
  }
  size_ = stride;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  vectors_.resize(m * b * block_dim_);
  for (std::size_t v = 0; v < m * b; ++v) {
    double* x = vectors_.data() + v * block_dim_;
    double sq = 0.0;
    while (!(sq > 0.0)) {
      sq = 0.0;
      for (std::size_t i = 0; i < block_dim_; ++i) {
        x[i] = gauss(rng);
        sq += x[i] * x[i];
      }
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t i = 0; i < block_dim_; ++i) x[i] *= inv;
  }
}

ProductCode ProductCode::sample(std::size_t d, double t_min, std::size_t m, std::uint64_t seed) {
  if (!(t_min >= 1.0)) throw std::invalid_argument("need at least one filter");
  return ProductCode(d, m, block_code_size(t_min, m), seed);
}

std::span<const double> ProductCode::subcode_vector(std::size_t k, std::uint64_t j) const {
  return {vectors_.data() + (k * b_ + j) * block_dim_, block_dim_};
}

std::vector<std::uint32_t> ProductCode::digits(CodeIndex idx) const {
  if (idx.packed >= size_) throw std::out_of_range("code index out of range");
  std::vector<std::uint32_t> out(m_);
  std::uint64_t rest = idx.packed;
  for (std::size_t k = 0; k < m_; ++k) {
    out[k] = static_cast<std::uint32_t>(rest % b_);
    rest /= b_;
  }
  return out;
}

CodeIndex ProductCode::pack(std::span<const std::uint32_t> digits) const {
  if (digits.size() != m_) throw std::out_of_range("code index needs one digit per block");
  std::uint64_t packed = 0;
  for (std::size_t k = 0; k < m_; ++k) {
    if (digits[k] >= b_) throw std::out_of_range("code index digit out of range");
    packed += digits[k] * strides_[k];
  }
  return {packed};
}

std::vector<double> ProductCode::codeword(CodeIndex idx) const {
  const auto dg = digits(idx);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_));
  std::vector<double> out(d_pad_);
  for (std::size_t k = 0; k < m_; ++k) {
    const auto v = subcode_vector(k, dg[k]);
    for (std::size_t i = 0; i < block_dim_; ++i) out[k * block_dim_ + i] = v[i] * scale;
  }
  return out;
}

std::vector<double> ProductCode::raw_block_scores(std::span<const double> target) const {
  if (target.size() > d_pad_) throw std::invalid_argument("target longer than the code");
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_));
  std::vector<double> out(m_ * b_, 0.0);
  for (std::size_t k = 0; k < m_; ++k) {
    const std::size_t begin = k * block_dim_;
    if (begin >= target.size()) continue;
    const auto block = target.subspan(begin, std::min(block_dim_, target.size() - begin));
    for (std::uint64_t j = 0; j < b_; ++j) {
      out[k * b_ + j] = dot(subcode_vector(k, j), block) * scale;
    }
  }
  return out;
}

BlockScores::BlockScores(const ProductCode& code, std::span<const double> target)
    : m_(code.blocks()), b_(code.block_size()) {
  scores_ = code.raw_block_scores(target);
  ids_.resize(scores_.size());
  std::vector<double> sorted(scores_.size());
  for (std::size_t k = 0; k < m_; ++k) {
    const auto row = std::span<const double>(scores_).subspan(k * b_, b_);
    auto ids = std::span<std::uint32_t>(ids_).subspan(k * b_, b_);
    std::iota(ids.begin(), ids.end(), std::uint32_t{0});
    std::sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
      return row[a] > row[b] || (row[a] == row[b] && a < b);
    });
    for (std::uint64_t r = 0; r < b_; ++r) sorted[k * b_ + r] = row[ids[r]];
  }
  scores_ = std::move(sorted);
}

double codeword_score(const ProductCode& code, std::span<const double> raw_scores,
                      CodeIndex idx) {
  const std::uint64_t b = code.block_size();
  std::uint64_t rest = idx.packed;
  double s = 0.0;
  for (std::size_t k = 0; k < code.blocks(); ++k) {
    s += raw_scores[k * b + rest % b];
    rest /= b;
  }
  return s;
}

}  // namespace sphf
