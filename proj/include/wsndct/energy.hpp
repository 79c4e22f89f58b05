#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "wsndct/clustering.hpp"
#include "wsndct/deployment.hpp"
#include "wsndct/routing.hpp"

namespace wsndct {

// One scalar sent over a link of length d costs d^alpha. Radio electronics
// constants are deliberately not modeled, so all costs are in distance^alpha
// units per transmitted coefficient/reading.
enum class MultihopCost { FixedRange, ActualDistance };

struct EnergyModel {
  int alpha = 2;  // 2 (free space) or 4 (multipath); closed forms need 2
  MultihopCost multihop_cost = MultihopCost::FixedRange;
};

struct ClusterEnergy {
  std::size_t cluster_index = 0;
  double intra = 0.0;
  double to_bs = 0.0;
};

struct EnergyReport {
  double intra_cluster = 0.0;
  double to_bs = 0.0;
  double total = 0.0;
  std::vector<ClusterEnergy> per_cluster;
};

namespace detail {

inline void require_alpha2(int alpha, const char* what) {
  if (alpha != 2)
    throw UnsupportedModelError(std::string(what) + ": closed form defined only for alpha = 2");
}

}  // namespace detail

// Mean intra-cluster cost for a square area, idealized equal clusters:
//   (n/n_c - 1) * L^2 / (2 pi)
inline double analytic_intra_square(std::size_t n, std::size_t n_c, double side_l,
                                    int alpha = 2) {
  detail::require_alpha2(alpha, "analytic_intra_square");
  if (n_c < 1 || n < n_c) throw InvalidArgumentError("analytic_intra_square: need n >= n_c >= 1");
  if (!(side_l > 0.0)) throw InvalidArgumentError("analytic_intra_square: L must be positive");
  const double ratio = static_cast<double>(n) / static_cast<double>(n_c) - 1.0;
  return ratio * side_l * side_l / (2.0 * std::numbers::pi);
}

// Disk-area counterpart: (n/n_c - 1) * R0^2 / 2
inline double analytic_intra_disk(std::size_t n, std::size_t n_c, double radius_r0,
                                  int alpha = 2) {
  detail::require_alpha2(alpha, "analytic_intra_disk");
  if (n_c < 1 || n < n_c) throw InvalidArgumentError("analytic_intra_disk: need n >= n_c >= 1");
  if (!(radius_r0 > 0.0)) throw InvalidArgumentError("analytic_intra_disk: R0 must be positive");
  const double ratio = static_cast<double>(n) / static_cast<double>(n_c) - 1.0;
  return ratio * radius_r0 * radius_r0 / 2.0;
}

// Expected squared distance from a uniform point in the L x L square to the
// BS at (L_i, L/2):
//   (1/L) * ((L - L_i)^3 + L_i^3) / 3 + L^2 / 12
// The signed cubes keep the identity with the defining integral when L_i > L.
inline double analytic_e_d2_square(double side_l, double bs_li) {
  if (!(side_l > 0.0)) throw InvalidArgumentError("analytic_e_d2_square: L must be positive");
  if (bs_li < 0.0) throw InvalidArgumentError("analytic_e_d2_square: L_i must be non-negative");
  const double a = side_l - bs_li;
  return (a * a * a + bs_li * bs_li * bs_li) / (3.0 * side_l) + side_l * side_l / 12.0;
}

// Disk with the BS at the center: E[d^2] = R0^2 / 2
inline double analytic_e_d2_disk(double radius_r0) {
  if (!(radius_r0 > 0.0)) throw InvalidArgumentError("analytic_e_d2_disk: R0 must be positive");
  return radius_r0 * radius_r0 / 2.0;
}

// Total for direct CH->BS forwarding of k_total coefficients.
inline double analytic_total_direct_square(std::size_t n, std::size_t n_c, double side_l,
                                           double bs_li, std::size_t k_total, int alpha = 2) {
  return analytic_intra_square(n, n_c, side_l, alpha) +
         static_cast<double>(k_total) * analytic_e_d2_square(side_l, bs_li);
}

inline double analytic_total_direct_disk(std::size_t n, std::size_t n_c, double radius_r0,
                                         std::size_t k_total, int alpha = 2) {
  return analytic_intra_disk(n, n_c, radius_r0, alpha) +
         static_cast<double>(k_total) * analytic_e_d2_disk(radius_r0);
}

// Total for multi-hop relaying: intra + E[hops] * R^2 * K.
inline double analytic_total_multihop(double intra_cost, double expected_hops, double range_r,
                                      std::size_t k_total) {
  if (!(expected_hops >= 1.0))
    throw InvalidArgumentError("analytic_total_multihop: expected hops must be >= 1");
  if (!(range_r > 0.0)) throw InvalidArgumentError("analytic_total_multihop: R must be positive");
  if (intra_cost < 0.0) throw InvalidArgumentError("analytic_total_multihop: negative intra cost");
  return intra_cost + expected_hops * range_r * range_r * static_cast<double>(k_total);
}

enum class RouteKind { Direct, Multihop };

// What to do with a cluster head the routing tree could not connect.
enum class UnreachablePolicy { Error, FallbackDirect, Skip };

struct RouteSpec {
  RouteKind kind = RouteKind::Direct;
  const RoutingTree* tree = nullptr;  // required for Multihop
  UnreachablePolicy unreachable = UnreachablePolicy::Error;
};

// Per-link empirical accounting. Every non-CH member pays dist(member, CH)^alpha
// for its one reading; each CH pays per coefficient: dist(CH, BS)^alpha when
// direct, hops * R^alpha (FixedRange) or the sum of link^alpha along its path
// (ActualDistance) when multi-hop. Receive costs are not charged.
inline EnergyReport empirical_energy(const Deployment& deployment, const ClusterSet& clusters,
                                     std::span<const std::size_t> payload_sizes,
                                     const RouteSpec& route, const EnergyModel& model) {
  if (model.alpha != 2 && model.alpha != 4)
    throw InvalidArgumentError("empirical_energy: alpha must be 2 or 4");
  if (payload_sizes.size() != clusters.clusters.size())
    throw InvalidArgumentError("empirical_energy: payload sizes misaligned with clusters");
  if (route.kind == RouteKind::Multihop && route.tree == nullptr)
    throw InvalidArgumentError("empirical_energy: multihop route needs a tree");

  const auto link_cost = [&](double d2) { return model.alpha == 2 ? d2 : d2 * d2; };

  const auto path_cost = [&](int ch_id) {
    double cost = 0.0;
    const RoutingTree::Entry* e = route.tree->find(ch_id);
    while (e != nullptr) {
      cost += link_cost(e->edge_length * e->edge_length);
      if (e->parent_id < 0) break;
      e = route.tree->find(e->parent_id);
    }
    return cost;
  };

  EnergyReport report;
  report.per_cluster.reserve(clusters.clusters.size());
  for (std::size_t i = 0; i < clusters.clusters.size(); ++i) {
    const Cluster& cluster = clusters.clusters[i];
    const Position head_pos = deployment.nodes[cluster.head];
    double intra = 0.0;
    for (const int member : cluster.members) {
      if (member == cluster.head) continue;
      intra += link_cost(squared_distance(deployment.nodes[member], head_pos));
    }

    const double k_i = static_cast<double>(payload_sizes[i]);
    double to_bs = 0.0;
    if (route.kind == RouteKind::Direct) {
      to_bs = k_i * link_cost(squared_distance(head_pos, deployment.bs));
    } else {
      const RoutingTree::Entry* entry = route.tree->find(cluster.head);
      if (entry == nullptr &&
          !std::binary_search(route.tree->unreachable.begin(), route.tree->unreachable.end(),
                              cluster.head))
        throw InvalidArgumentError("empirical_energy: routing tree does not cover cluster head " +
                                   std::to_string(cluster.head));
      if (entry != nullptr) {
        if (model.multihop_cost == MultihopCost::FixedRange) {
          to_bs = k_i * static_cast<double>(entry->hops) *
                  link_cost(route.tree->range_r * route.tree->range_r);
        } else {
          to_bs = k_i * path_cost(cluster.head);
        }
      } else {
        switch (route.unreachable) {
          case UnreachablePolicy::Error:
            throw RoutingError("empirical_energy: cluster head " +
                               std::to_string(cluster.head) + " is unreachable");
          case UnreachablePolicy::FallbackDirect:
            to_bs = k_i * link_cost(squared_distance(head_pos, deployment.bs));
            break;
          case UnreachablePolicy::Skip:
            to_bs = 0.0;
            break;
        }
      }
    }

    report.per_cluster.push_back(ClusterEnergy{i, intra, to_bs});
    report.intra_cluster += intra;
    report.to_bs += to_bs;
  }
  report.total = report.intra_cluster + report.to_bs;
  return report;
}

}  // namespace wsndct
