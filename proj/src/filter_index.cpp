#include "sphf/filter_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace sphf {

ProbeSchedule::ProbeSchedule(std::vector<double> thresholds) : thresholds_(std::move(thresholds)) {
  if (thresholds_.size() < 2) throw std::invalid_argument("probe schedule needs two thresholds");
  if (thresholds_.front() != 1.0) throw std::invalid_argument("probe schedule must start at 1");
  for (std::size_t i = 1; i < thresholds_.size(); ++i) {
    if (!(thresholds_[i] < thresholds_[i - 1])) {
      throw std::invalid_argument("probe thresholds must be strictly decreasing");
    }
  }
  if (!(thresholds_.back() >= 0.0)) throw std::invalid_argument("last probe threshold below 0");
}

ProbeSchedule ProbeSchedule::uniform(double last, std::size_t intervals) {
  if (intervals < 1) throw std::invalid_argument("need at least one probe interval");
  std::vector<double> t(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    t[i] = 1.0 - (1.0 - last) * static_cast<double>(i) / static_cast<double>(intervals);
  }
  t.front() = 1.0;
  t.back() = last;
  return ProbeSchedule(std::move(t));
}

ScoreInterval ProbeSchedule::interval(std::size_t i) const {
  if (i >= intervals()) throw std::out_of_range("probe interval out of range");
  ScoreInterval s;
  s.low = thresholds_[i + 1];
  s.high = i == 0 ? std::numeric_limits<double>::infinity() : thresholds_[i];
  s.low_closed = i + 1 == intervals();
  return s;
}

FilterIndex::FilterIndex(const PlanParams& params, std::uint64_t code_seed)
    : params_(params),
      code_(params.d, params.m, params.b, code_seed),
      alpha_q_(params.alpha_q),
      alpha_u_(params.alpha_u) {}

FilterIndex::FilterIndex(ProductCode code, double alpha_q, double alpha_u)
    : code_(std::move(code)), alpha_q_(alpha_q), alpha_u_(alpha_u) {
  params_.d = code_.dim();
  params_.m = code_.blocks();
  params_.b = code_.block_size();
  params_.t_actual = static_cast<double>(code_.size());
  params_.alpha_q = alpha_q;
  params_.alpha_u = alpha_u;
  params_.beta = alpha_u > 0.0 ? alpha_q / alpha_u : 1.0;
}

FilterIndex::FilterIndex(const FilterIndex& other)
    : params_(other.params_),
      code_(other.code_),
      alpha_q_(other.alpha_q_),
      alpha_u_(other.alpha_u_),
      buckets_(other.buckets_),
      points_(other.points_) {
  const IndexStats s = other.stats();
  counters_.inserts = s.inserts;
  counters_.deletes = s.deletes;
  counters_.queries = s.queries;
  counters_.candidates_scanned = s.candidates_scanned;
  counters_.buckets_touched = s.buckets_touched;
}

std::vector<CodeIndex> FilterIndex::update_set(const UnitVector& p) const {
  return decode_above(code_, p.coords(), alpha_u_);
}

std::size_t FilterIndex::insert(PointId id, const UnitVector& p) {
  if (p.dim() != code_.dim()) {
    throw std::invalid_argument("point has dimension " + std::to_string(p.dim()) +
                                ", index expects " + std::to_string(code_.dim()));
  }
  if (points_.contains(id)) throw std::invalid_argument("duplicate point id " + std::to_string(id));
  const auto filters = update_set(p);
  for (CodeIndex idx : filters) {
    Bucket& bucket = buckets_[idx];
    bucket.insert(std::lower_bound(bucket.begin(), bucket.end(), id), id);
  }
  points_.emplace(id, p);
  counters_.inserts.fetch_add(1, std::memory_order_relaxed);
  counters_.buckets_touched.fetch_add(filters.size(), std::memory_order_relaxed);
  return filters.size();
}

std::size_t FilterIndex::erase(PointId id) {
  const auto it = points_.find(id);
  if (it == points_.end()) throw std::out_of_range("unknown point id " + std::to_string(id));
  const auto filters = update_set(it->second);
  for (CodeIndex idx : filters) {
    const auto b = buckets_.find(idx);
    if (b == buckets_.end()) continue;
    Bucket& bucket = b->second;
    const auto pos = std::lower_bound(bucket.begin(), bucket.end(), id);
    if (pos != bucket.end() && *pos == id) bucket.erase(pos);
    if (bucket.empty()) buckets_.erase(b);
  }
  points_.erase(it);
  counters_.deletes.fetch_add(1, std::memory_order_relaxed);
  counters_.buckets_touched.fetch_add(filters.size(), std::memory_order_relaxed);
  return filters.size();
}

// Scans buckets for one query, comparing each point at most once.
class FilterIndex::Scan {
 public:
  Scan(const FilterIndex& index, const UnitVector& q, Angle target, QueryOptions options)
      : index_(index), q_(q), target_(target), options_(options) {}

  // Returns false once the query can stop.
  bool visit_bucket(CodeIndex idx) {
    ++result_.buckets_visited;
    const auto b = index_.buckets_.find(idx);
    if (b == index_.buckets_.end()) return true;
    for (PointId id : b->second) {
      ++result_.collisions;
      if (!seen_.insert(id).second) continue;
      ++result_.candidates_examined;
      const Angle a = angle_between(q_, index_.points_.at(id));
      if (!result_.best || a < result_.best->angle ||
          (a == result_.best->angle && id < result_.best->id)) {
        result_.best = Neighbor{id, a};
      }
      if (a <= target_ && !result_.found_within_target) {
        result_.found_within_target = true;
        if (!options_.exhaustive) return false;
      }
    }
    return true;
  }

  bool done() const { return result_.found_within_target && !options_.exhaustive; }
  QueryResult& result() { return result_; }

 private:
  const FilterIndex& index_;
  const UnitVector& q_;
  Angle target_;
  QueryOptions options_;
  std::unordered_set<PointId> seen_;
  QueryResult result_;
};

QueryResult FilterIndex::run_query(const UnitVector& q, Angle target,
                                   std::span<const ScoreInterval> intervals,
                                   QueryOptions options) const {
  if (q.dim() != code_.dim()) {
    throw std::invalid_argument("query has dimension " + std::to_string(q.dim()) +
                                ", index expects " + std::to_string(code_.dim()));
  }
  const BlockScores scores(code_, q.coords());
  const PruningBounds bounds(scores);
  Scan scan(*this, q, target, options);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const bool had_hit = scan.result().found_within_target;
    enumerate_interval(code_, scores, bounds, intervals[i],
                       [&](CodeIndex idx, double) { return scan.visit_bucket(idx); });
    if (!had_hit && scan.result().found_within_target) scan.result().hit_interval = i;
    if (scan.done()) break;
  }
  QueryResult r = std::move(scan.result());
  counters_.queries.fetch_add(1, std::memory_order_relaxed);
  counters_.candidates_scanned.fetch_add(r.candidates_examined, std::memory_order_relaxed);
  counters_.buckets_touched.fetch_add(r.buckets_visited, std::memory_order_relaxed);
  return r;
}

QueryResult FilterIndex::query(const UnitVector& q, Angle target, QueryOptions options) const {
  const ScoreInterval all = ScoreInterval::above(alpha_q_);
  return run_query(q, target, std::span<const ScoreInterval>(&all, 1), options);
}

QueryResult FilterIndex::query_probed(const UnitVector& q, Angle target,
                                      const ProbeSchedule& schedule,
                                      QueryOptions options) const {
  std::vector<ScoreInterval> intervals;
  for (std::size_t i = 0; i < schedule.intervals(); ++i) intervals.push_back(schedule.interval(i));
  return run_query(q, target, intervals, options);
}

void FilterIndex::reset_stats() {
  counters_.inserts = 0;
  counters_.deletes = 0;
  counters_.queries = 0;
  counters_.candidates_scanned = 0;
  counters_.buckets_touched = 0;
}

IndexStats FilterIndex::stats() const {
  IndexStats s;
  s.inserts = counters_.inserts.load();
  s.deletes = counters_.deletes.load();
  s.queries = counters_.queries.load();
  s.candidates_scanned = counters_.candidates_scanned.load();
  s.buckets_touched = counters_.buckets_touched.load();
  return s;
}

bool FilterIndex::audit() const {
  std::unordered_map<PointId, std::vector<double>> raw;
  auto raw_scores = [&](PointId id) -> const std::vector<double>& {
    auto it = raw.find(id);
    if (it == raw.end()) {
      it = raw.emplace(id, code_.raw_block_scores(points_.at(id).coords())).first;
    }
    return it->second;
  };

  std::size_t entries = 0;
  for (const auto& [idx, bucket] : buckets_) {
    if (bucket.empty() || idx.packed >= code_.size()) return false;
    if (!std::is_sorted(bucket.begin(), bucket.end()) ||
        std::adjacent_find(bucket.begin(), bucket.end()) != bucket.end()) {
      return false;
    }
    for (PointId id : bucket) {
      if (!points_.contains(id)) return false;
      if (!(codeword_score(code_, raw_scores(id), idx) >= alpha_u_)) return false;
    }
    entries += bucket.size();
  }

  std::size_t expected = 0;
  for (const auto& [id, p] : points_) {
    for (CodeIndex idx : update_set(p)) {
      const auto b = buckets_.find(idx);
      if (b == buckets_.end() || !std::binary_search(b->second.begin(), b->second.end(), id)) {
        return false;
      }
      ++expected;
    }
  }
  return entries == expected;
}

}  // namespace sphf
