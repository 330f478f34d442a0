#include "sphf/index_io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "binary_io.hpp"

namespace sphf {
namespace {

constexpr char kMagic[4] = {'S', 'P', 'H', 'I'};

void write_params(std::ostream& out, const PlanParams& p) {
  detail::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.regime));
  detail::write_f64(out, p.log_n);
  detail::write_f64(out, p.theta.radians());
  detail::write_f64(out, p.beta);
  detail::write_f64(out, p.alpha_q);
  detail::write_f64(out, p.alpha_u);
  detail::write_f64(out, p.kappa);
  detail::write_f64(out, p.t_requested);
  detail::write_f64(out, p.t_actual);
  detail::write_f64(out, p.rho_q);
  detail::write_f64(out, p.rho_u);
  detail::write_f64(out, p.log_wedge_near);
}

PlanParams read_params(std::istream& in) {
  PlanParams p;
  const auto regime = detail::read_le<std::uint32_t>(in, "regime");
  if (regime > static_cast<std::uint32_t>(Regime::critical)) {
    throw std::runtime_error("unknown regime code " + std::to_string(regime));
  }
  p.regime = static_cast<Regime>(regime);
  p.log_n = detail::read_f64(in, "plan");
  p.theta = Angle(detail::read_f64(in, "plan"));
  p.beta = detail::read_f64(in, "plan");
  p.alpha_q = detail::read_f64(in, "plan");
  p.alpha_u = detail::read_f64(in, "plan");
  p.kappa = detail::read_f64(in, "plan");
  p.t_requested = detail::read_f64(in, "plan");
  p.t_actual = detail::read_f64(in, "plan");
  p.rho_q = detail::read_f64(in, "plan");
  p.rho_u = detail::read_f64(in, "plan");
  p.log_wedge_near = detail::read_f64(in, "plan");
  return p;
}

}  // namespace

void save_index(const std::filesystem::path& path, const FilterIndex& index) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const ProductCode& code = index.code();
  out.write(kMagic, sizeof kMagic);
  detail::write_le<std::uint32_t>(out, kIndexFileVersion);
  detail::write_le<std::uint64_t>(out, code.dim());
  detail::write_le<std::uint64_t>(out, code.blocks());
  detail::write_le<std::uint64_t>(out, code.block_size());
  detail::write_le<std::uint64_t>(out, code.seed());
  write_params(out, index.params());

  std::vector<PointId> ids;
  ids.reserve(index.size());
  for (const auto& [id, p] : index.points()) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  detail::write_le<std::uint64_t>(out, ids.size());
  for (PointId id : ids) {
    detail::write_le<std::uint64_t>(out, id);
    for (double x : index.points().at(id).coords()) detail::write_f64(out, x);
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

FilterIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open index file " + path.string());
  char head[4] = {};
  if (!in.read(head, sizeof head) || !std::equal(head, head + 4, kMagic)) {
    throw std::runtime_error(path.string() + " is not an index file");
  }
  const auto version = detail::read_le<std::uint32_t>(in, "version");
  if (version != kIndexFileVersion) {
    throw std::runtime_error("unsupported index file version " + std::to_string(version));
  }
  const auto d = detail::read_le<std::uint64_t>(in, "code");
  const auto m = detail::read_le<std::uint64_t>(in, "code");
  const auto b = detail::read_le<std::uint64_t>(in, "code");
  const auto seed = detail::read_le<std::uint64_t>(in, "code");
  PlanParams params = read_params(in);
  params.d = d;
  params.m = m;
  params.b = b;

  FilterIndex index(params, seed);
  const auto count = detail::read_le<std::uint64_t>(in, "point count");
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto id = detail::read_le<std::uint64_t>(in, "point id");
    std::vector<double> coords(d);
    for (auto& x : coords) x = detail::read_f64(in, "point");
    index.insert(id, UnitVector(std::move(coords)));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error("trailing bytes in index file");
  }
  index.reset_stats();
  return index;
}

}  // namespace sphf
