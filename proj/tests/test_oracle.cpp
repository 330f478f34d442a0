#include <algorithm>
#include <random>

#include "doctest.h"
#include "sphf/filter_index.hpp"
#include "sphf/instance.hpp"
#include "sphf/oracle.hpp"
#include "sphf/planner.hpp"

using namespace sphf;

TEST_CASE("linear_nn basics") {
  std::mt19937_64 rng(1);
  const UnitVector q = random_unit_vector(8, rng);
  CHECK_THROWS_AS(linear_nn({}, q), std::invalid_argument);
  std::vector<UnitVector> one = {random_unit_vector(8, rng)};
  CHECK(linear_nn(one, q).id == 0);
  // Ties go to the smallest id.
  std::vector<UnitVector> dup = {random_unit_vector(8, rng), q, q, random_unit_vector(8, rng)};
  const Neighbor nn = linear_nn(dup, q);
  CHECK(nn.id == 1);
  CHECK(nn.angle.radians() < 1e-7);
}

TEST_CASE("linear_nn finds the planted point when it is the closest") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    InstanceSpec s;
    s.n = 500;
    s.d = 40;
    s.theta = Angle(kPi / 4);
    s.seed = seed;
    const Instance inst = generate(s);
    double others = kPi;
    for (std::size_t i = 0; i < inst.dataset.size(); ++i) {
      if (i != *inst.planted_id) others = std::min(others, angle_between(inst.dataset[i], inst.query).radians());
    }
    if (s.theta.radians() < others) {
      CHECK(linear_nn(inst.dataset, inst.query).id == *inst.planted_id);
      ++checked;
    }
  }
  CHECK(checked > 90);
}

TEST_CASE("brute_decode") {
  std::mt19937_64 rng(2);
  const ProductCode c(8, 2, 10, 1);
  const UnitVector t = random_unit_vector(8, rng);
  const auto all = brute_decode(c, t.coords(), -2.0, 2.0);
  CHECK(all.size() == 100);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(brute_decode(c, t.coords(), 1.0, 2.0).empty());
  CHECK(brute_decode(c, t.coords(), ScoreInterval::above(-2.0)).size() == 100);
  const ProductCode big(40, 4, 40, 1);
  CHECK_THROWS_AS(brute_decode(big, random_unit_vector(40, rng).coords(), 0.1, 0.2),
                  std::invalid_argument);
  CHECK_NOTHROW(brute_decode(c, t.coords(), 0.1, 0.2, 100));
  CHECK_THROWS_AS(brute_decode(c, t.coords(), 0.1, 0.2, 99), std::invalid_argument);
}

TEST_CASE("exhaustive index queries agree with linear scan") {
  const std::size_t d = 24;
  const Angle theta(kPi / 4);
  const PlanParams p = sparse_params(128, d, theta, 1.0, 200.0, 2);
  int agree = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    InstanceSpec s;
    s.n = 128;
    s.d = d;
    s.theta = theta;
    s.seed = 1000 + trial;
    const Instance inst = generate(s);
    const std::uint64_t code_seed = 5000 + trial;
    FilterIndex idx(p, code_seed);
    for (std::size_t i = 0; i < inst.dataset.size(); ++i) idx.insert(i, inst.dataset[i]);
    const QueryResult r = idx.query(inst.query, Angle(kPi), QueryOptions{.exhaustive = true});

    // Linear scan over the points that share a bucket with the query.
    const ProductCode code(d, p.m, p.b, code_seed);
    auto qset = decode_above(code, inst.query.coords(), p.alpha_q);
    std::sort(qset.begin(), qset.end());
    std::vector<UnitVector> colliding;
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < inst.dataset.size(); ++i) {
      const auto uset = decode_above(code, inst.dataset[i].coords(), p.alpha_u);
      const bool shared = std::any_of(uset.begin(), uset.end(), [&](CodeIndex c) {
        return std::binary_search(qset.begin(), qset.end(), c);
      });
      if (shared) {
        colliding.push_back(inst.dataset[i]);
        ids.push_back(i);
      }
    }
    REQUIRE(r.candidates_examined == colliding.size());
    if (colliding.empty()) {
      CHECK_FALSE(r.best.has_value());
      continue;
    }
    REQUIRE(r.best.has_value());
    CHECK(r.best->id == ids[linear_nn(colliding, inst.query).id]);
    if (r.best->id == linear_nn(inst.dataset, inst.query).id) ++agree;
  }
  CHECK(agree >= 0.8 * trials);
}
