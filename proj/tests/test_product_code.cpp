#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "sphf/planner.hpp"
#include "sphf/product_code.hpp"
#include "support.hpp"

using namespace sphf;
using doctest::Approx;

TEST_CASE("default_m") {
  CHECK(default_m(2) == 1);
  CHECK(default_m(3) == 2);
  CHECK(default_m(128) == 24);
  CHECK(default_m(1024) == 49);
  for (std::size_t d = 2; d < 3000; d += 7) {
    CHECK(default_m(d) >= 1);
    CHECK(default_m(d) <= d);
  }
}

TEST_CASE("sample sizes and padding") {
  const ProductCode c = ProductCode::sample(12, 1000, 3, 1);
  CHECK(c.block_dim() == 4);
  CHECK(c.block_size() == 10);
  CHECK(c.size() == 1000);
  const ProductCode plain = ProductCode::sample(7, 50, 1, 1);
  CHECK(plain.blocks() == 1);
  CHECK(plain.size() >= 50);
  const ProductCode padded(10, 4, 3, 2);
  CHECK(padded.padded_dim() == 12);
  CHECK(padded.padded_dim() % padded.blocks() == 0);
  CHECK(padded.block_dim() == 3);
  CHECK_THROWS_AS(ProductCode(10, 0, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(ProductCode(10, 11, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(ProductCode(64, 64, 3, 0), std::invalid_argument);
}

TEST_CASE("subcode vectors are unit and seed determined") {
  const ProductCode a(20, 4, 9, 77), b(20, 4, 9, 77), c(20, 4, 9, 78);
  bool differs = false;
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::uint64_t j = 0; j < 9; ++j) {
      const auto v = a.subcode_vector(k, j);
      CHECK(std::abs(norm(v) - 1.0) < 1e-9);
      CHECK(std::equal(v.begin(), v.end(), b.subcode_vector(k, j).begin()));
      differs |= !std::equal(v.begin(), v.end(), c.subcode_vector(k, j).begin());
    }
  }
  CHECK(differs);
}

TEST_CASE("digits and pack round trip") {
  const ProductCode c(9, 3, 5, 0);
  for (std::uint64_t i = 0; i < c.size(); ++i) {
    const auto dg = c.digits(CodeIndex{i});
    CHECK(dg.size() == 3);
    CHECK(c.pack(dg) == CodeIndex{i});
  }
  std::vector<std::uint32_t> bad = {0, 5, 0};
  CHECK_THROWS_AS(c.pack(bad), std::out_of_range);
  CHECK(c.stride(2) == 25);
}

TEST_CASE("code words are unit vectors and m = 1 is the plain code") {
  const ProductCode c(30, 5, 7, 3);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto w = c.codeword(CodeIndex{rng() % c.size()});
    CHECK(w.size() == c.padded_dim());
    CHECK(std::abs(norm(w) - 1.0) < 1e-9);
  }
  const ProductCode one(6, 1, 4, 3);
  for (std::uint64_t j = 0; j < 4; ++j) {
    const auto w = one.codeword(CodeIndex{j});
    const auto v = one.subcode_vector(0, j);
    CHECK(std::equal(w.begin(), w.end(), v.begin()));
  }
}

TEST_CASE("block scores sum to the code word inner product") {
  std::mt19937_64 rng(2);
  const ProductCode c(14, 4, 6, 9);  // padded to 16
  const UnitVector t = random_unit_vector(14, rng);
  const auto raw = c.raw_block_scores(t.coords());
  std::vector<double> padded(t.coords().begin(), t.coords().end());
  padded.resize(c.padded_dim(), 0.0);
  for (int i = 0; i < 100; ++i) {
    const CodeIndex idx{rng() % c.size()};
    const auto w = c.codeword(idx);
    CHECK(std::abs(codeword_score(c, raw, idx) - dot(w, padded)) < 1e-12);
    // Padding adds zeros only, so the unpadded inner product agrees exactly.
    CHECK(dot(std::span<const double>(w).first(14), t.coords()) == dot(w, padded));
  }
  const ProductCode one(6, 1, 5, 1);
  const UnitVector u = random_unit_vector(6, rng);
  const auto s = one.raw_block_scores(u.coords());
  for (std::uint64_t j = 0; j < 5; ++j) CHECK(s[j] == Approx(dot(one.subcode_vector(0, j), u.coords())));
}

TEST_CASE("sorted block scores") {
  std::mt19937_64 rng(3);
  const ProductCode c(12, 3, 16, 4);
  const UnitVector t = random_unit_vector(12, rng);
  const BlockScores bs(c, t.coords());
  const auto raw = c.raw_block_scores(t.coords());
  for (std::size_t k = 0; k < 3; ++k) {
    const auto s = bs.scores(k);
    const auto ids = bs.ids(k);
    for (std::size_t r = 0; r < s.size(); ++r) {
      CHECK(s[r] == raw[k * 16 + ids[r]]);
      if (r > 0) {
        CHECK(s[r] <= s[r - 1]);
        if (s[r] == s[r - 1]) CHECK(ids[r] > ids[r - 1]);
      }
    }
  }
}

TEST_CASE("argmax per block maximizes over the whole code") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const ProductCode c(12, 3, 16, trial);
    const UnitVector t = random_unit_vector(12, rng);
    const BlockScores bs(c, t.coords());
    const auto raw = c.raw_block_scores(t.coords());
    std::vector<std::uint32_t> top = {bs.ids(0)[0], bs.ids(1)[0], bs.ids(2)[0]};
    const double best = codeword_score(c, raw, c.pack(top));
    double brute = -2.0;
    for (std::uint64_t i = 0; i < c.size(); ++i) brute = std::max(brute, codeword_score(c, raw, CodeIndex{i}));
    CHECK(best == Approx(brute).epsilon(1e-14));
  }
}

TEST_CASE("product code collisions track random-code wedge volumes") {
  // Fraction of code words in both caps around a pair at angle phi, compared
  // with the exact fraction for uniformly random code words.
  const std::size_t d = 16;
  const double a = 0.3;
  std::mt19937_64 rng(5);
  for (double phi : {kPi / 4, kPi / 3, kPi / 2}) {
    std::uint64_t hits = 0, total = 0;
    for (int trial = 0; trial < 400; ++trial) {
      const ProductCode c(d, 2, 32, 1000 + trial);
      const UnitVector p = random_unit_vector(d, rng);
      const UnitVector r = random_unit_vector(d, rng);
      std::vector<double> perp(d);
      const double along = dot(r.coords(), p.coords());
      for (std::size_t i = 0; i < d; ++i) perp[i] = r[i] - along * p[i];
      const double pn = norm(perp);
      std::vector<double> q(d);
      for (std::size_t i = 0; i < d; ++i) q[i] = std::cos(phi) * p[i] + std::sin(phi) * perp[i] / pn;
      const auto sp = c.raw_block_scores(p.coords());
      const auto sq = c.raw_block_scores(q);
      for (std::uint64_t i = 0; i < c.size(); ++i) {
        hits += codeword_score(c, sp, CodeIndex{i}) >= a && codeword_score(c, sq, CodeIndex{i}) >= a;
      }
      total += c.size();
    }
    const double measured = static_cast<double>(hits) / static_cast<double>(total);
    const double exact = testing::exact_wedge_fraction(a, a, phi, d);
    CHECK(exact >= 1e-4);
    CHECK(measured <= 2.0 * exact);
    CHECK(measured >= 0.5 * exact);
  }
}
