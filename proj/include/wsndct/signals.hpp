#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wsndct/deployment.hpp"
#include "wsndct/rng.hpp"
#include "wsndct/transform.hpp"

namespace wsndct {

struct GaussianBump {
  Position center;
  double amplitude = 0.0;
  double width = 1.0;
};

struct FourierTerm {
  int k_x = 0;
  int k_y = 0;
  double amplitude = 0.0;
  double phase_x = 0.0;
  double phase_y = 0.0;
};

// Concrete spatial field. GaussianBumps sums A_j * exp(-|p - c_j|^2 / (2 w_j^2));
// LowFreqFourier evaluates offset + a truncated 2-D cosine series over the
// area extent. Stand-in for the unavailable real trace data.
struct FieldModel {
  enum class Kind { GaussianBumps, LowFreqFourier };
  Kind kind = Kind::GaussianBumps;
  std::vector<GaussianBump> bumps;
  std::vector<FourierTerm> terms;
  double offset = 0.0;
  double extent_x = 1.0;
  double extent_y = 1.0;
};

inline double field_value(const FieldModel& model, Position p) {
  if (model.kind == FieldModel::Kind::GaussianBumps) {
    double v = model.offset;
    for (const auto& b : model.bumps) {
      if (!(b.width > 0.0)) throw InvalidArgumentError("field_value: bump width must be positive");
      v += b.amplitude * std::exp(-squared_distance(p, b.center) / (2.0 * b.width * b.width));
    }
    return v;
  }
  double v = model.offset;
  for (const auto& t : model.terms) {
    v += t.amplitude *
         std::cos(2.0 * std::numbers::pi * t.k_x * p.x / model.extent_x + t.phase_x) *
         std::cos(2.0 * std::numbers::pi * t.k_y * p.y / model.extent_y + t.phase_y);
  }
  return v;
}

// One reading per node, ordered by node id.
inline std::vector<Reading> sample_field(const FieldModel& model, const Deployment& deployment) {
  std::vector<Reading> readings;
  readings.reserve(deployment.nodes.size());
  for (std::size_t id = 0; id < deployment.nodes.size(); ++id)
    readings.push_back(Reading{static_cast<int>(id), field_value(model, deployment.nodes[id])});
  return readings;
}

namespace detail {

inline Position random_position_in(const AreaGeometry& geometry, Rng& rng) {
  if (geometry.kind() == AreaGeometry::Kind::Square)
    return Position{rng.uniform(0.0, geometry.side_l()), rng.uniform(0.0, geometry.side_l())};
  const double r = geometry.radius_r0() * std::sqrt(rng.next_double());
  const double a = 2.0 * std::numbers::pi * rng.next_double();
  return Position{r * std::cos(a), r * std::sin(a)};
}

}  // namespace detail

// Materialize a bump field from hyperparameters, deterministically from seed.
// Widths are fractions of the area extent.
inline FieldModel make_random_bumps(const AreaGeometry& geometry, std::size_t bump_count,
                                    double amp_lo, double amp_hi, double width_frac_lo,
                                    double width_frac_hi, std::uint64_t seed) {
  if (amp_hi < amp_lo || width_frac_hi < width_frac_lo || !(width_frac_lo > 0.0))
    throw InvalidArgumentError("make_random_bumps: bad parameter ranges");
  Rng rng = Rng(seed).child("field/bumps", 0);
  FieldModel model;
  model.kind = FieldModel::Kind::GaussianBumps;
  const double extent = geometry.extent();
  for (std::size_t i = 0; i < bump_count; ++i) {
    GaussianBump b;
    b.center = detail::random_position_in(geometry, rng);
    b.amplitude = rng.uniform(amp_lo, amp_hi);
    b.width = extent * rng.uniform(width_frac_lo, width_frac_hi);
    model.bumps.push_back(b);
  }
  return model;
}

// Truncated cosine series with random phases; amplitudes fall off with the
// frequency sum so the field stays smooth.
inline FieldModel make_random_fourier(const AreaGeometry& geometry, int cutoff, double amplitude,
                                      std::uint64_t seed) {
  if (cutoff < 0) throw InvalidArgumentError("make_random_fourier: cutoff must be >= 0");
  Rng rng = Rng(seed).child("field/fourier", 0);
  FieldModel model;
  model.kind = FieldModel::Kind::LowFreqFourier;
  model.offset = amplitude;
  model.extent_x = model.extent_y = geometry.extent();
  for (int kx = 0; kx <= cutoff; ++kx) {
    for (int ky = 0; ky <= cutoff; ++ky) {
      if (kx == 0 && ky == 0) continue;
      if (kx + ky > cutoff) continue;
      FourierTerm t;
      t.k_x = kx;
      t.k_y = ky;
      t.amplitude = amplitude / (1.0 + kx + ky) * rng.uniform(0.5, 1.0);
      t.phase_x = rng.uniform(0.0, 2.0 * std::numbers::pi);
      t.phase_y = rng.uniform(0.0, 2.0 * std::numbers::pi);
      model.terms.push_back(t);
    }
  }
  return model;
}

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

// Additive white Gaussian measurement noise. sigma = 0 returns the input
// bit-for-bit.
inline std::vector<Reading> add_noise(std::span<const Reading> readings, const NoiseSpec& spec) {
  if (spec.sigma < 0.0) throw InvalidArgumentError("add_noise: sigma must be non-negative");
  std::vector<Reading> out(readings.begin(), readings.end());
  if (spec.sigma == 0.0) return out;
  Rng rng = Rng(spec.seed).child("noise/gaussian", 0);
  for (auto& r : out) r.value += spec.sigma * rng.normal();
  return out;
}

// Trace CSV: header `node_id,epoch,value`, one reading per row. Returns the
// requested epoch's readings sorted by node id.
inline std::vector<Reading> load_trace_csv(const std::filesystem::path& path, std::size_t epoch) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("load_trace_csv: cannot open " + path.string());

  const auto parse_int = [](std::string_view field, long long& out) {
    const auto* begin = field.data();
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
  };
  const auto parse_double = [](std::string_view field, double& out) {
    const auto* begin = field.data();
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
  };

  std::vector<Reading> readings;
  std::set<std::pair<long long, long long>> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header_checked = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_checked) {
      if (line != "node_id,epoch,value")
        throw InvalidDataError("load_trace_csv: expected header `node_id,epoch,value` at line 1");
      header_checked = true;
      continue;
    }
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw InvalidDataError("load_trace_csv: malformed row at line " + std::to_string(line_no));
    long long node_id = 0, row_epoch = 0;
    double value = 0.0;
    const std::string_view sv(line);
    if (!parse_int(sv.substr(0, c1), node_id) ||
        !parse_int(sv.substr(c1 + 1, c2 - c1 - 1), row_epoch) ||
        !parse_double(sv.substr(c2 + 1), value))
      throw InvalidDataError("load_trace_csv: non-numeric field at line " +
                             std::to_string(line_no));
    if (node_id < 0 || row_epoch < 0)
      throw InvalidDataError("load_trace_csv: negative id or epoch at line " +
                             std::to_string(line_no));
    if (!seen.insert({node_id, row_epoch}).second)
      throw InvalidDataError("load_trace_csv: duplicate (node, epoch) at line " +
                             std::to_string(line_no));
    if (static_cast<std::size_t>(row_epoch) == epoch)
      readings.push_back(Reading{static_cast<int>(node_id), value});
  }
  if (readings.empty())
    throw NotFoundError("load_trace_csv: epoch " + std::to_string(epoch) + " not present in " +
                        path.string());
  std::sort(readings.begin(), readings.end(),
            [](const Reading& a, const Reading& b) { return a.node_id < b.node_id; });
  return readings;
}

}  // namespace wsndct
