#include "sphf/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "sphf/bench.hpp"
#include "sphf/filter_index.hpp"
#include "sphf/index_io.hpp"
#include "sphf/instance.hpp"
#include "sphf/planner.hpp"
#include "sphf/vector_io.hpp"

namespace sphf {
namespace {

using json = nlohmann::json;

// Settings that take a value; each is both a flag (--key) and a config key.
const std::vector<std::string> kValueKeys = {
    "mode", "regime", "n",    "d",       "theta", "c",       "beta",         "kappa",
    "m",    "trials", "seed", "out",     "data",  "queries", "index",        "points",
    "model", "target-angle"};
const std::vector<std::string> kFlagKeys = {"exhaustive", "timing"};

const std::map<std::string, std::string> kHelp = {
    {"mode", "plan | curve | generate | build | query | bench"},
    {"regime", "sparse (default) | dense | critical"},
    {"n", "dataset size; accepts forms like 2^14"},
    {"d", "dimension"},
    {"theta", "near angle in (0, pi/2); accepts pi/3, 2*pi/5"},
    {"c", "approximation factor > 1, alternative to --theta"},
    {"beta", "alpha_q / alpha_u, in [cos theta, 1/cos theta] (default 1)"},
    {"kappa", "filter count multiplier (default 4)"},
    {"m", "block count of the product code (default ceil(ln^2 d))"},
    {"trials", "bench trials"},
    {"seed", "random seed"},
    {"out", "bench CSV output path (default stdout)"},
    {"data", "dataset file (binary or CSV)"},
    {"queries", "query file (binary or CSV)"},
    {"index", "index file"},
    {"points", "curve points (default 101)"},
    {"model", "generate: sparse | dense data model"},
    {"target-angle", "query: report hits within this angle (default theta)"},
    {"exhaustive", "query: scan all buckets instead of stopping at the first hit"},
    {"timing", "bench: add a wall-clock column"}};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

double parse_plain(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return x;
}

class Settings {
 public:
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  std::string required(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing --" + key);
    return it->second;
  }
  std::optional<double> real(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return parse_real(values_.at(key));
  }
  double real(const std::string& key, double fallback) const { return real(key).value_or(fallback); }
  std::optional<std::uint64_t> count(const std::string& key) const {
    const auto x = real(key);
    if (!x) return std::nullopt;
    if (!(*x >= 0.0) || *x != std::floor(*x) || *x > 1.8e19) {
      throw ConfigError("--" + key + " must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(*x);
  }
  bool flag(const std::string& key) const {
    const std::string v = str(key, "false");
    return v == "true" || v == "1";
  }

 private:
  std::map<std::string, std::string> values_;
};

void load_config_file(const std::string& path, Settings& settings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::find(kValueKeys.begin(), kValueKeys.end(), key) != kValueKeys.end() ||
                       std::find(kFlagKeys.begin(), kFlagKeys.end(), key) != kFlagKeys.end();
    if (!known) throw ConfigError("unknown config key '" + key + "'");
    if (value.is_string()) {
      settings.set(key, value.get<std::string>());
    } else if (value.is_boolean()) {
      settings.set(key, value.get<bool>() ? "true" : "false");
    } else if (value.is_number_integer() || value.is_number_unsigned()) {
      settings.set(key, value.dump());
    } else if (value.is_number()) {
      std::ostringstream s;
      s.precision(17);
      s << value.get<double>();
      settings.set(key, s.str());
    } else if (!value.is_null()) {
      throw ConfigError("config key '" + key + "' must be a scalar");
    }
  }
}

Angle theta_of(const Settings& s) {
  const bool has_theta = s.has("theta");
  const bool has_c = s.has("c");
  if (has_theta == has_c) throw ConfigError("give exactly one of --theta and --c");
  if (has_c) {
    const double c = *s.real("c");
    if (!(c > 1.0)) throw ConfigError("--c must exceed 1");
    return theta_from_c(c);
  }
  const double t = *s.real("theta");
  if (!(t > 0.0 && t < kPi / 2)) throw ConfigError("--theta must lie in (0, pi/2)");
  return Angle(t);
}

std::size_t dimension_of(const Settings& s) {
  const auto d = s.count("d");
  if (!d) throw ConfigError("missing --d");
  return static_cast<std::size_t>(*d);
}

std::optional<std::size_t> m_of(const Settings& s) {
  const auto m = s.count("m");
  if (!m) return std::nullopt;
  return static_cast<std::size_t>(*m);
}

PlanParams plan_of(const Settings& s, std::optional<double> n_default = std::nullopt,
                   std::optional<std::size_t> d_default = std::nullopt) {
  const Regime regime = parse_regime(s.str("regime", "sparse"));
  const Angle theta = theta_of(s);
  const std::size_t d = s.has("d") ? dimension_of(s) : d_default.value_or(0);
  if (d == 0) throw ConfigError("missing --d");
  const double beta = s.real("beta", 1.0);
  const double kappa = s.real("kappa", 4.0);
  if (!(kappa > 0.0)) throw ConfigError("--kappa must be positive");
  if (regime == Regime::critical) return critical_params(d, theta, beta, kappa, m_of(s));
  PlanRequest req;
  req.regime = regime;
  const auto n = s.real("n");
  if (!n && !n_default) throw ConfigError("missing --n");
  req.n = n.value_or(n_default.value_or(0.0));
  req.d = d;
  req.theta = theta;
  req.beta = beta;
  req.kappa = kappa;
  req.m = m_of(s);
  return plan(req);
}

json plan_json(const PlanParams& p) {
  return json{{"regime", to_string(p.regime)},
              {"n", p.n()},
              {"log_n", p.log_n},
              {"d", p.d},
              {"theta", p.theta.radians()},
              {"beta", p.beta},
              {"alpha_q", p.alpha_q},
              {"alpha_u", p.alpha_u},
              {"kappa", p.kappa},
              {"t_requested", p.t_requested},
              {"t_actual", p.t_actual},
              {"m", p.m},
              {"b", p.b},
              {"rho_q", p.rho_q},
              {"rho_u", p.rho_u},
              {"log_wedge_near", p.log_wedge_near}};
}

// Writes to --out when given, else to `fallback`.
template <class Emit>
void emit(const Settings& s, std::ostream& fallback, Emit&& body) {
  if (!s.has("out")) {
    body(fallback);
    return;
  }
  const std::string path = s.required("out");
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  body(file);
  if (!file) throw std::runtime_error("write failed for " + path);
}

int cmd_plan(const Settings& s, std::ostream& out) {
  const PlanParams p = plan_of(s);
  emit(s, out, [&](std::ostream& o) {
    o.precision(17);
    o << "alpha_q " << p.alpha_q << '\n'
      << "alpha_u " << p.alpha_u << '\n'
      << "t_requested " << p.t_requested << '\n'
      << "t_actual " << p.t_actual << '\n'
      << "m " << p.m << '\n'
      << "b " << p.b << '\n'
      << "rho_q " << p.rho_q << '\n'
      << "rho_u " << p.rho_u << '\n'
      << plan_json(p).dump(2) << '\n';
  });
  return kExitOk;
}

int cmd_curve(const Settings& s, std::ostream& out) {
  const Regime regime = parse_regime(s.str("regime", "sparse"));
  const Angle theta = theta_of(s);
  const auto points = s.count("points").value_or(101);
  if (points < 2) throw ConfigError("--points must be at least 2");
  std::optional<Density> density;
  if (regime == Regime::dense) {
    const auto n = s.real("n");
    if (!n) throw ConfigError("the dense curve needs --n");
    density = Density::of_count(*n, dimension_of(s));
  }
  const auto curve = tradeoff_curve(theta, static_cast<std::size_t>(points), regime, density);
  emit(s, out, [&](std::ostream& o) {
    o.precision(17);
    o << "# schema sphf-curve v1\n" << "beta,rho_u,rho_q\n";
    for (const auto& pt : curve) o << pt.beta << ',' << pt.rho_u << ',' << pt.rho_q << '\n';
  });
  return kExitOk;
}

int cmd_generate(const Settings& s, std::ostream& out) {
  InstanceSpec spec;
  const std::string model = s.str("model", s.str("regime", "sparse") == "sparse" ? "sparse" : "dense");
  if (model == "sparse") {
    spec.model = Model::sparse;
  } else if (model == "dense") {
    spec.model = Model::dense;
  } else {
    throw ConfigError("unknown model '" + model + "'");
  }
  const auto n = s.count("n");
  if (!n) throw ConfigError("missing --n");
  spec.n = static_cast<std::size_t>(*n);
  spec.d = dimension_of(s);
  spec.theta = theta_of(s);
  spec.seed = s.count("seed").value_or(0);
  const Instance inst = generate(spec);
  write_vectors(s.required("data"), inst.dataset);
  if (s.has("queries")) write_vectors(s.required("queries"), std::vector<UnitVector>{inst.query});
  out << "planted_id " << *inst.planted_id << '\n';
  return kExitOk;
}

int cmd_build(const Settings& s, std::ostream& out) {
  const auto data = read_vectors(s.required("data"));
  if (data.empty()) throw ConfigError("empty dataset");
  const std::string index_path = s.required("index");
  const PlanParams p = plan_of(s, static_cast<double>(data.size()), data.front().dim());
  if (p.d != data.front().dim()) throw ConfigError("--d does not match the data dimension");
  FilterIndex index(p, s.count("seed").value_or(0));
  std::uint64_t touched = 0;
  for (std::size_t i = 0; i < data.size(); ++i) touched += index.insert(i, data[i]);
  save_index(index_path, index);
  out << "points " << data.size() << '\n'
      << "buckets " << index.buckets().size() << '\n'
      << "mean_update_buckets " << static_cast<double>(touched) / static_cast<double>(data.size())
      << '\n';
  return kExitOk;
}

int cmd_query(const Settings& s, std::ostream& out) {
  const std::string index_path = s.required("index");
  if (!std::filesystem::is_regular_file(index_path)) {
    throw ConfigError("index file " + index_path + " does not exist");
  }
  const FilterIndex index = load_index(index_path);
  const auto queries = read_vectors(s.required("queries"));
  const Angle target = s.has("target-angle") ? Angle(*s.real("target-angle"))
                       : s.has("theta") || s.has("c") ? theta_of(s)
                                                      : index.params().theta;
  QueryOptions options;
  options.exhaustive = s.flag("exhaustive");
  emit(s, out, [&](std::ostream& o) {
    o.precision(17);
    o << "# schema sphf-query v1\n"
      << "query,found,id,angle,candidates,collisions,buckets\n";
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const QueryResult r = index.query(queries[i], target, options);
      o << i << ',' << int{r.found_within_target} << ',';
      if (r.best) {
        o << r.best->id << ',' << r.best->angle.radians();
      } else {
        o << ',';
      }
      o << ',' << r.candidates_examined << ',' << r.collisions << ',' << r.buckets_visited << '\n';
    }
  });
  return kExitOk;
}

int cmd_bench(const Settings& s, std::ostream& out, std::ostream& err) {
  BenchConfig cfg;
  cfg.regime = parse_regime(s.str("regime", "sparse"));
  cfg.theta = theta_of(s);
  cfg.d = dimension_of(s);
  if (cfg.regime != Regime::critical) {
    const auto n = s.real("n");
    if (!n) throw ConfigError("missing --n");
    cfg.n = *n;
  }
  cfg.beta = s.real("beta", 1.0);
  cfg.kappa = s.real("kappa", 4.0);
  cfg.m = m_of(s);
  cfg.trials = static_cast<std::size_t>(s.count("trials").value_or(1));
  cfg.seed = s.count("seed").value_or(0);
  cfg.timing = s.flag("timing");
  const BenchReport report = run_bench(cfg);
  emit(s, out, [&](std::ostream& o) { write_bench_csv(o, report, cfg.timing); });
  write_bench_summary(s.has("out") ? out : err, report.summary);
  return kExitOk;
}

}  // namespace

double parse_real(const std::string& text) {
  std::string t;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
  }
  if (t.empty()) throw ConfigError("empty number");
  if (const auto caret = t.find('^'); caret != std::string::npos) {
    return std::pow(parse_plain(t.substr(0, caret)), parse_plain(t.substr(caret + 1)));
  }
  if (const auto pi = t.find("pi"); pi != std::string::npos) {
    double value = kPi;
    std::string head = t.substr(0, pi);
    std::string tail = t.substr(pi + 2);
    if (!head.empty()) {
      if (head.back() != '*') throw ConfigError("bad angle expression '" + text + "'");
      head.pop_back();
      value *= parse_plain(head);
    }
    if (!tail.empty()) {
      if (tail.front() != '/') throw ConfigError("bad angle expression '" + text + "'");
      value /= parse_plain(tail.substr(1));
    }
    return value;
  }
  return parse_plain(t);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Asymmetric spherical filters: planning, indexing and experiments", "sphf"};
  std::map<std::string, std::string> given;
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with settings; flags override it");
  for (const auto& key : kValueKeys) app.add_option("--" + key, given[key], kHelp.at(key));
  std::map<std::string, bool> flags;
  for (const auto& key : kFlagKeys) app.add_flag("--" + key, flags[key], kHelp.at(key));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    Settings settings;
    if (!config_path.empty()) load_config_file(config_path, settings);
    for (const auto& key : kValueKeys) {
      if (app.count("--" + key) > 0) settings.set(key, given[key]);
    }
    for (const auto& key : kFlagKeys) {
      if (app.count("--" + key) > 0) settings.set(key, flags[key] ? "true" : "false");
    }

    const std::string mode = settings.required("mode");
    if (mode == "plan") return cmd_plan(settings, out);
    if (mode == "curve") return cmd_curve(settings, out);
    if (mode == "generate") return cmd_generate(settings, out);
    if (mode == "build") return cmd_build(settings, out);
    if (mode == "query") return cmd_query(settings, out);
    if (mode == "bench") return cmd_bench(settings, out, err);
    throw ConfigError("unknown mode '" + mode + "'");
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace sphf
