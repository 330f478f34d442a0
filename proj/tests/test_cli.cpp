#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sphf/cli.hpp"
#include "sphf/filter_index.hpp"
#include "sphf/planner.hpp"
#include "sphf/vector_io.hpp"

using namespace sphf;
using doctest::Approx;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json plan_json(const std::string& out) {
  return nlohmann::json::parse(out.substr(out.find('{')));
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("sphf_cli_" + name);
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) row.push_back(f.empty() ? -1.0 : std::stod(f));
    rows.push_back(row);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("parse_real") {
  CHECK(parse_real("2^14") == 16384.0);
  CHECK(parse_real("pi/3") == Approx(kPi / 3));
  CHECK(parse_real("2*pi/5") == Approx(2 * kPi / 5));
  CHECK(parse_real("pi") == Approx(kPi));
  CHECK(parse_real(" 1.5 ") == 1.5);
  CHECK_THROWS_AS(parse_real("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_real("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_real("pi*3"), std::invalid_argument);
}

TEST_CASE("plan prints parameters and JSON") {
  const Run r = cli({"--mode", "plan", "--c", "2", "--beta", "1", "--n", "2^14", "--d", "128"});
  REQUIRE(r.code == 0);
  for (const char* key : {"alpha_q ", "alpha_u ", "t_requested ", "t_actual ", "m ", "rho_q ", "rho_u "}) {
    CHECK(r.out.find(key) != std::string::npos);
  }
  const auto j = plan_json(r.out);
  CHECK(j["rho_q"].get<double>() == Approx(1.0 / 7.0).epsilon(1e-12));
  CHECK(j["rho_u"].get<double>() == Approx(1.0 / 7.0).epsilon(1e-12));
  CHECK(j["m"].get<int>() == 24);
}

TEST_CASE("critical plan") {
  const Run r = cli({"--mode", "plan", "--regime", "critical", "--theta", "pi/3", "--d", "64"});
  REQUIRE(r.code == 0);
  const auto j = plan_json(r.out);
  CHECK(j["rho_q"].get<double>() == Approx(0.40942).epsilon(1e-5));
  CHECK(j["rho_u"].get<double>() == Approx(std::log(9.0 / 8.0) / std::log(4.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("configuration errors exit with 2") {
  Run r = cli({"--mode", "plan", "--theta", "pi/3", "--beta", "4", "--n", "1000", "--d", "64"});
  CHECK(r.code == 2);
  CHECK(r.err.find("optimal range") != std::string::npos);
  CHECK(cli({"--mode", "plan", "--theta", "1", "--c", "2", "--n", "10", "--d", "8"}).code == 2);
  CHECK(cli({"--mode", "plan", "--n", "10", "--d", "8"}).code == 2);
  CHECK(cli({"--mode", "dance"}).code == 2);
  CHECK(cli({"--bogus"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--mode", "plan", "--c", "2", "--n", "ten", "--d", "8"}).code == 2);
  CHECK(cli({"--mode", "plan", "--config", temp_path("no_such.json").string()}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("flags override the config file") {
  const auto path = temp_path("cfg.json");
  std::ofstream(path) << R"({"mode": "plan", "c": 2, "beta": 1, "n": 16384, "d": 128})";
  const Run base = cli({"--config", path.string()});
  REQUIRE(base.code == 0);
  CHECK(plan_json(base.out)["rho_q"].get<double>() == Approx(1.0 / 7.0));
  const Run over = cli({"--config", path.string(), "--beta", "1.2"});
  REQUIRE(over.code == 0);
  const double want = sparse_exponents(theta_from_c(2.0), 1.2).rho_q;
  CHECK(plan_json(over.out)["rho_q"].get<double>() == Approx(want).epsilon(1e-12));
  std::ofstream(path) << R"({"mode": "plan", "colour": 2})";
  CHECK(cli({"--config", path.string()}).code == 2);
  std::filesystem::remove(path);
}

TEST_CASE("curve output") {
  const Run r = cli({"--mode", "curve", "--c", "2", "--points", "1000"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# schema", 0) == 0);
  CHECK(r.out.find("beta,rho_u,rho_q\n") != std::string::npos);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 1000);
  const Angle th = theta_from_c(2.0);
  CHECK(std::abs(rows.front()[1]) < 1e-15);
  CHECK(rows.front()[2] == Approx(7.0 / 16.0).epsilon(1e-14));
  CHECK(std::abs(rows.back()[2]) < 1e-15);
  CHECK(rows.back()[1] == Approx(7.0 / 9.0).epsilon(1e-14));
  for (const auto& row : rows) {
    CHECK(std::abs(std::sqrt(row[2]) + th.cos() * std::sqrt(row[1]) - th.sin()) < 1e-10);
  }
  const double c = std::sqrt(2.0 + std::sqrt(2.0));
  const Run edge = cli({"--mode", "curve", "--c", std::to_string(c), "--points", "11"});
  REQUIRE(edge.code == 0);
  CHECK(csv_rows(edge.out).back()[1] == Approx(1.0).epsilon(1e-5));
}

TEST_CASE("bench output is deterministic") {
  const std::vector<std::string> args = {"--mode", "bench", "--theta", "pi/4", "--n", "256",
                                         "--d", "32", "--kappa", "16", "--trials", "4", "--seed", "3"};
  const Run a = cli(args);
  const Run b = cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.err.find("recall") != std::string::npos);
  CHECK(csv_rows(a.out).size() == 4);
  auto timed = args;
  timed.push_back("--timing");
  const Run t = cli(timed);
  CHECK(t.out.find("wall_ms") != std::string::npos);
  const auto path = temp_path("bench.csv");
  auto to_file = args;
  to_file.insert(to_file.end(), {"--out", path.string()});
  const Run f = cli(to_file);
  REQUIRE(f.code == 0);
  CHECK(slurp(path) == a.out);
  CHECK(f.out.find("recall") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("bucket counts move with beta") {
  // Larger beta: bigger update sets, smaller query sets.
  const Angle th(kPi / 3);
  std::vector<double> upd, qry;
  for (double beta : {th.cos(), 1.0, 1.2}) {
    std::ostringstream b;
    b.precision(17);
    b << beta;
    const Run r = cli({"--mode", "bench", "--theta", "pi/3", "--n", "1024", "--d", "40", "--beta",
                       b.str(), "--trials", "20", "--m", "2"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    double u = 0.0, q = 0.0;
    for (const auto& row : rows) {
      q += row[7];
      u += row[8];
    }
    upd.push_back(u);
    qry.push_back(q);
  }
  CHECK(upd[0] < upd[1]);
  CHECK(upd[1] < upd[2]);
  CHECK(qry[0] > qry[1]);
  CHECK(qry[1] > qry[2]);
}

TEST_CASE("generate, build and query round trip") {
  const auto data = temp_path("data.sphf");
  const auto queries = temp_path("queries.sphf");
  const auto index = temp_path("index.sphi");
  const Run g = cli({"--mode", "generate", "--n", "300", "--d", "24", "--theta", "pi/4", "--seed",
                     "5", "--data", data.string(), "--queries", queries.string()});
  REQUIRE(g.code == 0);
  const Run b = cli({"--mode", "build", "--data", data.string(), "--index", index.string(),
                     "--theta", "pi/4", "--kappa", "50", "--seed", "9"});
  REQUIRE(b.code == 0);
  const Run q = cli({"--mode", "query", "--index", index.string(), "--queries", queries.string(),
                     "--exhaustive"});
  REQUIRE(q.code == 0);
  const auto rows = csv_rows(q.out);
  REQUIRE(rows.size() == 1);

  // Same computation in memory.
  const auto pts = read_vectors(data);
  const auto qs = read_vectors(queries);
  FilterIndex mem(sparse_params(300, 24, Angle(kPi / 4), 1.0, 50.0), 9);
  for (std::size_t i = 0; i < pts.size(); ++i) mem.insert(i, pts[i]);
  const QueryResult want = mem.query(qs[0], Angle(kPi / 4), QueryOptions{.exhaustive = true});
  CHECK(rows[0][1] == static_cast<double>(want.found_within_target));
  CHECK(rows[0][4] == static_cast<double>(want.candidates_examined));
  CHECK(rows[0][6] == static_cast<double>(want.buckets_visited));
  if (want.best) CHECK(rows[0][2] == static_cast<double>(want.best->id));

  CHECK(cli({"--mode", "query", "--index", temp_path("missing.sphi").string(), "--queries",
             queries.string()}).code == 2);
  CHECK(cli({"--mode", "build", "--data", temp_path("missing.sphf").string(), "--index",
             index.string(), "--theta", "pi/4"}).code == 1);
  for (const auto& p : {data, queries, index}) std::filesystem::remove(p);
}
