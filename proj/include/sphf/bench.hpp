#pragma once

// End-to-end planted-instance experiments: generate, index, query, and
// compare measured costs with the volume-based predictions.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sphf/geometry.hpp"
#include "sphf/planner.hpp"

namespace sphf {

struct BenchConfig {
  Regime regime = Regime::sparse;
  double n = 0.0;  // ignored for the critical regime
  std::size_t d = 0;
  Angle theta{kPi / 3};
  double beta = 1.0;
  double kappa = 4.0;
  std::optional<std::size_t> m;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  bool timing = false;  // adds a wall-clock column, which breaks byte-identical output
};

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;         // seed + trial
  std::uint32_t resamples = 0;    // instances discarded for an accidental near point
  bool recall = false;            // a point within theta was returned
  bool planted_hit = false;       // the returned point is the planted one
  std::uint64_t candidates = 0;   // distinct points compared with the query
  std::uint64_t collisions = 0;
  std::uint64_t query_buckets = 0;
  double update_buckets = 0.0;    // mean |Update(p)| over the dataset
  std::optional<double> wall_ms;  // query wall time
};

struct BenchPrediction {
  double candidates = 0.0;      // sparse: n t W(a_q, a_u, pi/2); dense: n t C(a_q) C(a_u)
  double update_buckets = 0.0;  // t C(a_u)
  double query_buckets = 0.0;   // t C(a_q)
};

struct BenchSummary {
  PlanParams params;
  std::size_t trials = 0;
  double recall = 0.0;
  double planted_hit_rate = 0.0;
  double mean_candidates = 0.0;
  double mean_query_buckets = 0.0;
  double mean_update_buckets = 0.0;
  BenchPrediction predicted;
};

struct BenchReport {
  std::vector<TrialResult> trials;
  BenchSummary summary;
};

/// Plan the configuration describes; the critical regime uses the rounded
/// critical density.
PlanParams bench_plan(const BenchConfig& config);

BenchPrediction predict_costs(const PlanParams& params);

/// Trial i uses seed + i, so any subset of trials can be rerun on its own.
TrialResult run_trial(const BenchConfig& config, const PlanParams& params, std::size_t trial);

BenchReport run_bench(const BenchConfig& config);

/// One row per trial in trial order, preceded by a schema comment and header.
void write_bench_csv(std::ostream& out, const BenchReport& report, bool timing);
void write_bench_summary(std::ostream& out, const BenchSummary& summary);

}  // namespace sphf
