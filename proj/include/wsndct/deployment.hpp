#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "wsndct/geometry.hpp"
#include "wsndct/rng.hpp"

namespace wsndct {

// Immutable sensor field: node index = node id.
struct Deployment {
  AreaGeometry geometry = AreaGeometry::square(1.0);
  std::vector<Position> nodes;
  Position bs;
  std::uint64_t seed = 0;
};

// Uniform i.i.d. placement of n sensors plus the base station.
//
// Square areas put the BS at (bs_li, L/2); bs_li may exceed L (BS outside the
// sensing area). Disk areas put the BS at the center and take no bs_li. Disk
// sampling uses radius = R0 * sqrt(u) so the density is uniform by area.
inline Deployment deploy(const AreaGeometry& geometry, std::size_t n,
                         std::optional<double> bs_li, std::uint64_t seed) {
  if (n == 0) throw InvalidArgumentError("deploy: node count must be positive");

  Position bs;
  if (geometry.kind() == AreaGeometry::Kind::Square) {
    if (!bs_li) throw InvalidArgumentError("deploy: square geometry requires bs_li");
    if (*bs_li < 0.0) throw InvalidArgumentError("deploy: bs_li must be non-negative");
    bs = Position{*bs_li, geometry.side_l() / 2.0};
  } else {
    if (bs_li) throw InvalidArgumentError("deploy: bs_li is only meaningful for square geometry");
    bs = Position{0.0, 0.0};
  }

  Rng rng = Rng(seed).child("deploy/positions", 0);
  std::vector<Position> nodes;
  nodes.reserve(n);
  if (geometry.kind() == AreaGeometry::Kind::Square) {
    const double side = geometry.side_l();
    for (std::size_t i = 0; i < n; ++i) {
      const double x = rng.uniform(0.0, side);
      const double y = rng.uniform(0.0, side);
      nodes.push_back(Position{x, y});
    }
  } else {
    const double r0 = geometry.radius_r0();
    for (std::size_t i = 0; i < n; ++i) {
      const double radius = r0 * std::sqrt(rng.next_double());
      const double angle = 2.0 * std::numbers::pi * rng.next_double();
      nodes.push_back(Position{radius * std::cos(angle), radius * std::sin(angle)});
    }
  }
  return Deployment{geometry, std::move(nodes), bs, seed};
}

}  // namespace wsndct
