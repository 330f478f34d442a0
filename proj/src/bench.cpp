#include "sphf/bench.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "sphf/filter_index.hpp"
#include "sphf/instance.hpp"

namespace sphf {
namespace {

// Instance and code streams for one attempt of one trial.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool has_accidental_near_point(const Instance& inst, Angle theta) {
  for (std::size_t i = 0; i < inst.dataset.size(); ++i) {
    if (inst.planted_id && i == *inst.planted_id) continue;
    if (angle_between(inst.dataset[i], inst.query) <= theta) return true;
  }
  return false;
}

}  // namespace

PlanParams bench_plan(const BenchConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (config.regime == Regime::critical) {
    return critical_params(config.d, config.theta, config.beta, config.kappa, config.m);
  }
  PlanRequest req;
  req.regime = config.regime;
  req.n = config.n;
  req.d = config.d;
  req.theta = config.theta;
  req.beta = config.beta;
  req.kappa = config.kappa;
  req.m = config.m;
  return plan(req);
}

BenchPrediction predict_costs(const PlanParams& p) {
  const double d = static_cast<double>(p.d);
  const double t = p.t_actual;
  const double cap_q = std::exp(d * cap_log_volume(p.alpha_q));
  const double cap_u = std::exp(d * cap_log_volume(p.alpha_u));
  BenchPrediction out;
  out.update_buckets = t * cap_u;
  out.query_buckets = t * cap_q;
  if (p.regime == Regime::sparse) {
    out.candidates = p.n() * t * wedge_volume(p.alpha_q, p.alpha_u, Angle(kPi / 2)).asymptotic_volume(p.d);
  } else {
    out.candidates = p.n() * t * cap_q * cap_u;
  }
  return out;
}

TrialResult run_trial(const BenchConfig& config, const PlanParams& params, std::size_t trial) {
  TrialResult r;
  r.trial = trial;
  r.seed = config.seed + trial;

  InstanceSpec spec;
  spec.model = config.regime == Regime::sparse ? Model::sparse : Model::dense;
  spec.n = static_cast<std::size_t>(std::llround(params.n()));
  spec.d = config.d;
  spec.theta = config.theta;
  spec.planted = true;

  auto attempt_instance = [&](std::uint32_t attempt) {
    spec.seed = mix(r.seed ^ (std::uint64_t{attempt} << 40));
    return generate(spec);
  };
  Instance inst = attempt_instance(0);
  while (spec.model == Model::sparse && has_accidental_near_point(inst, config.theta)) {
    inst = attempt_instance(++r.resamples);
  }

  FilterIndex index(params, mix(r.seed ^ 0x636f6465ULL));
  std::uint64_t update_total = 0;
  for (std::size_t i = 0; i < inst.dataset.size(); ++i) update_total += index.insert(i, inst.dataset[i]);
  r.update_buckets = static_cast<double>(update_total) / static_cast<double>(inst.dataset.size());

  // Nudged target so the planted point at exactly theta survives rounding.
  const Angle target(std::min(kPi, config.theta.radians() + 1e-9));
  const auto start = std::chrono::steady_clock::now();
  const QueryResult q = index.query(inst.query, target, QueryOptions{.exhaustive = true});
  const auto stop = std::chrono::steady_clock::now();
  if (config.timing) r.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();

  r.recall = q.found_within_target;
  r.planted_hit = q.best && inst.planted_id && q.best->id == *inst.planted_id;
  r.candidates = q.candidates_examined;
  r.collisions = q.collisions;
  r.query_buckets = q.buckets_visited;
  return r;
}

BenchReport run_bench(const BenchConfig& config) {
  BenchReport report;
  const PlanParams params = bench_plan(config);
  report.trials.reserve(config.trials);
  for (std::size_t i = 0; i < config.trials; ++i) report.trials.push_back(run_trial(config, params, i));

  BenchSummary& s = report.summary;
  s.params = params;
  s.trials = config.trials;
  s.predicted = predict_costs(params);
  for (const auto& t : report.trials) {
    s.recall += t.recall;
    s.planted_hit_rate += t.planted_hit;
    s.mean_candidates += static_cast<double>(t.candidates);
    s.mean_query_buckets += static_cast<double>(t.query_buckets);
    s.mean_update_buckets += t.update_buckets;
  }
  const double k = static_cast<double>(config.trials);
  s.recall /= k;
  s.planted_hit_rate /= k;
  s.mean_candidates /= k;
  s.mean_query_buckets /= k;
  s.mean_update_buckets /= k;
  return report;
}

void write_bench_csv(std::ostream& out, const BenchReport& report, bool timing) {
  out << "# schema sphf-bench v1\n";
  out << "trial,seed,resamples,recall,planted_hit,candidates,collisions,query_buckets,"
         "update_buckets";
  if (timing) out << ",wall_ms";
  out << '\n';
  const auto prec = out.precision(17);
  for (const auto& t : report.trials) {
    out << t.trial << ',' << t.seed << ',' << t.resamples << ',' << int{t.recall} << ','
        << int{t.planted_hit} << ',' << t.candidates << ',' << t.collisions << ','
        << t.query_buckets << ',' << t.update_buckets;
    if (timing) out << ',' << t.wall_ms.value_or(0.0);
    out << '\n';
  }
  out.precision(prec);
}

void write_bench_summary(std::ostream& out, const BenchSummary& s) {
  const PlanParams& p = s.params;
  out << "regime " << to_string(p.regime) << ", n " << p.n() << ", d " << p.d << ", theta "
      << p.theta.radians() << ", beta " << p.beta << ", kappa " << p.kappa << '\n'
      << "alpha_q " << p.alpha_q << ", alpha_u " << p.alpha_u << ", m " << p.m << ", b " << p.b
      << ", t " << p.t_actual << '\n'
      << "trials " << s.trials << '\n'
      << "recall " << s.recall << " (planted returned " << s.planted_hit_rate << ")\n"
      << "candidates per query: measured " << s.mean_candidates << ", predicted "
      << s.predicted.candidates << '\n'
      << "buckets per query: measured " << s.mean_query_buckets << ", predicted "
      << s.predicted.query_buckets << '\n'
      << "buckets per update: measured " << s.mean_update_buckets << ", predicted "
      << s.predicted.update_buckets << '\n';
}

}  // namespace sphf
