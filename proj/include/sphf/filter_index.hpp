#pragma once

// Mutable nearest-neighbor index over a product code of filters.
//
// A point p lives in bucket idx iff score(idx, p) >= alpha_u; a query q scans
// the buckets with score(idx, q) >= alpha_q. Only non-empty buckets are
// stored, and each bucket keeps its ids sorted.
//
// Concurrency: any number of const calls (query, query_probed, stats) may run
// together; insert and erase need exclusive access.

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sphf/decoder.hpp"
#include "sphf/geometry.hpp"
#include "sphf/planner.hpp"
#include "sphf/product_code.hpp"

namespace sphf {

using PointId = std::uint64_t;

struct IndexStats {
  std::uint64_t inserts = 0;
  std::uint64_t deletes = 0;
  std::uint64_t queries = 0;
  std::uint64_t candidates_scanned = 0;
  std::uint64_t buckets_touched = 0;

  friend bool operator==(const IndexStats&, const IndexStats&) = default;
};

struct Neighbor {
  PointId id = 0;
  Angle angle;
};

struct QueryResult {
  std::optional<Neighbor> best;
  std::uint64_t candidates_examined = 0;  // distinct points compared with q
  std::uint64_t collisions = 0;           // bucket entries read, duplicates included
  std::uint64_t buckets_visited = 0;      // decoded filters, empty or not
  bool found_within_target = false;
  std::optional<std::size_t> hit_interval;  // probe interval of the first hit
};

struct QueryOptions {
  /// Scan every colliding point and report the closest instead of stopping
  /// at the first one within the target angle.
  bool exhaustive = false;
};

/// Descending thresholds 1 = a_0 > a_1 > ... > a_T. Interval i covers
/// scores in (a_{i+1}, a_i]; the first interval is unbounded above and the
/// last one is closed below, so the pieces partition { score >= a_T }.
class ProbeSchedule {
 public:
  explicit ProbeSchedule(std::vector<double> thresholds);

  /// 1 = a_0 > ... > a_T spaced evenly down to `last`.
  static ProbeSchedule uniform(double last, std::size_t intervals);

  const std::vector<double>& thresholds() const { return thresholds_; }
  std::size_t intervals() const { return thresholds_.size() - 1; }
  ScoreInterval interval(std::size_t i) const;

 private:
  std::vector<double> thresholds_;
};

class FilterIndex {
 public:
  using Bucket = std::vector<PointId>;
  using BucketMap = std::unordered_map<CodeIndex, Bucket, CodeIndexHash>;

  /// Index over the code (d, m, b, seed) taken from a plan.
  FilterIndex(const PlanParams& params, std::uint64_t code_seed);
  FilterIndex(ProductCode code, double alpha_q, double alpha_u);

  FilterIndex(const FilterIndex& other);
  FilterIndex& operator=(const FilterIndex&) = delete;

  /// Registers p; returns the number of buckets it joined (|Update(p)|).
  std::size_t insert(PointId id, const UnitVector& p);
  /// Removes id from all its buckets; returns the number of buckets touched.
  std::size_t erase(PointId id);

  QueryResult query(const UnitVector& q, Angle target, QueryOptions options = {}) const;
  QueryResult query_probed(const UnitVector& q, Angle target, const ProbeSchedule& schedule,
                           QueryOptions options = {}) const;

  IndexStats stats() const;
  void reset_stats();

  /// Checks both directions of the bucket-membership invariant and the
  /// sorted/non-empty bucket shape. Returns false on any violation.
  bool audit() const;

  const ProductCode& code() const { return code_; }
  const PlanParams& params() const { return params_; }
  double alpha_q() const { return alpha_q_; }
  double alpha_u() const { return alpha_u_; }
  const BucketMap& buckets() const { return buckets_; }
  const std::unordered_map<PointId, UnitVector>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  struct Counters {
    std::atomic<std::uint64_t> inserts{0};
    std::atomic<std::uint64_t> deletes{0};
    std::atomic<std::uint64_t> queries{0};
    std::atomic<std::uint64_t> candidates_scanned{0};
    std::atomic<std::uint64_t> buckets_touched{0};
  };

  class Scan;

  std::vector<CodeIndex> update_set(const UnitVector& p) const;
  QueryResult run_query(const UnitVector& q, Angle target,
                        std::span<const ScoreInterval> intervals, QueryOptions options) const;

  PlanParams params_;
  ProductCode code_;
  double alpha_q_;
  double alpha_u_;
  BucketMap buckets_;
  std::unordered_map<PointId, UnitVector> points_;
  mutable Counters counters_;
};

}  // namespace sphf
