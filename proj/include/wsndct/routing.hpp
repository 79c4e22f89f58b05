#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "wsndct/geometry.hpp"

namespace wsndct {

enum class RouteStrategy { BfsMinHop, GreedyTowardBs };

struct ChPosition {
  int id = -1;
  Position pos;
};

// Parent links over cluster heads rooted at the BS, built on the unit-disk
// graph of radius range_r. Unreachable heads are listed, not patched.
struct RoutingTree {
  struct Entry {
    int ch_id = -1;
    int parent_id = -1;  // -1 = base station
    std::size_t hops = 0;
    double edge_length = 0.0;
  };

  double range_r = 0.0;
  RouteStrategy strategy = RouteStrategy::BfsMinHop;
  Position bs;
  std::vector<Entry> entries;    // reachable heads, ascending ch_id
  std::vector<int> unreachable;  // ascending ch_id

  const Entry* find(int ch_id) const {
    const auto it = std::lower_bound(
        entries.begin(), entries.end(), ch_id,
        [](const Entry& e, int id) { return e.ch_id < id; });
    return (it != entries.end() && it->ch_id == ch_id) ? &*it : nullptr;
  }
};

// CDF of the hop distribution: p[i] = P(hops <= i+1); max_hops = p.size().
// The last entry need not be 1 (conditional / capped CDFs are allowed).
struct HopCdf {
  std::vector<double> p;
};

struct HopStats {
  double mean_hops = 0.0;
  HopCdf cdf;
};

// Tree construction.
//
// BfsMinHop: breadth-first shortest-hop tree; a head at level h parents on the
// level-(h-1) candidate closest to the BS (then lowest id; the BS itself wins
// level-1 ties since its distance is zero).
//
// GreedyTowardBs: heads processed by ascending BS distance attach to the
// already-connected node within range whose BS distance is smallest.
inline RoutingTree build_routing_tree(std::span<const ChPosition> heads, Position bs,
                                      double range_r, RouteStrategy strategy) {
  if (!(range_r > 0.0))
    throw InvalidArgumentError("build_routing_tree: range must be positive");

  const std::size_t m = heads.size();
  const double r2 = range_r * range_r;
  std::vector<double> bs_d2(m);
  for (std::size_t i = 0; i < m; ++i) bs_d2[i] = squared_distance(heads[i].pos, bs);

  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> hops(m, kUnset);
  std::vector<int> parent(m, -1);
  std::vector<double> edge(m, 0.0);

  if (strategy == RouteStrategy::BfsMinHop) {
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < m; ++i) {
      if (bs_d2[i] <= r2) {
        hops[i] = 1;
        parent[i] = -1;
        edge[i] = std::sqrt(bs_d2[i]);
        queue.push_back(i);
      }
    }
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < m; ++v) {
        if (hops[v] != kUnset) continue;
        if (squared_distance(heads[u].pos, heads[v].pos) <= r2) {
          hops[v] = hops[u] + 1;
          queue.push_back(v);
        }
      }
    }
    // Parent choice among the previous level: closest to the BS, then lowest id.
    for (std::size_t v = 0; v < m; ++v) {
      if (hops[v] == kUnset || hops[v] == 1) continue;
      std::size_t best = kUnset;
      for (std::size_t u = 0; u < m; ++u) {
        if (hops[u] != hops[v] - 1) continue;
        if (squared_distance(heads[u].pos, heads[v].pos) > r2) continue;
        if (best == kUnset || bs_d2[u] < bs_d2[best] ||
            (bs_d2[u] == bs_d2[best] && heads[u].id < heads[best].id))
          best = u;
      }
      parent[v] = heads[best].id;
      edge[v] = std::sqrt(squared_distance(heads[best].pos, heads[v].pos));
    }
  } else {
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (bs_d2[a] != bs_d2[b]) return bs_d2[a] < bs_d2[b];
      return heads[a].id < heads[b].id;
    });
    for (const std::size_t v : order) {
      if (bs_d2[v] <= r2) {
        hops[v] = 1;
        parent[v] = -1;
        edge[v] = std::sqrt(bs_d2[v]);
        continue;
      }
      std::size_t best = kUnset;
      for (const std::size_t u : order) {
        if (u == v) continue;
        if (hops[u] == kUnset) continue;
        if (squared_distance(heads[u].pos, heads[v].pos) > r2) continue;
        if (best == kUnset || bs_d2[u] < bs_d2[best] ||
            (bs_d2[u] == bs_d2[best] && heads[u].id < heads[best].id))
          best = u;
      }
      if (best == kUnset) continue;  // unreachable
      hops[v] = hops[best] + 1;
      parent[v] = heads[best].id;
      edge[v] = std::sqrt(squared_distance(heads[best].pos, heads[v].pos));
    }
  }

  RoutingTree tree;
  tree.range_r = range_r;
  tree.strategy = strategy;
  tree.bs = bs;
  std::vector<std::size_t> by_id(m);
  for (std::size_t i = 0; i < m; ++i) by_id[i] = i;
  std::sort(by_id.begin(), by_id.end(),
            [&](std::size_t a, std::size_t b) { return heads[a].id < heads[b].id; });
  for (const std::size_t i : by_id) {
    if (hops[i] == kUnset) {
      tree.unreachable.push_back(heads[i].id);
    } else {
      tree.entries.push_back(RoutingTree::Entry{heads[i].id, parent[i], hops[i], edge[i]});
    }
  }
  return tree;
}

// Mean hop count and empirical CDF over the reachable heads.
inline HopStats hop_statistics(const RoutingTree& tree) {
  if (tree.entries.empty())
    throw NoStatisticsError("hop_statistics: no reachable cluster head");
  std::size_t max_hops = 0;
  double sum = 0.0;
  for (const auto& e : tree.entries) {
    max_hops = std::max(max_hops, e.hops);
    sum += static_cast<double>(e.hops);
  }
  std::vector<std::size_t> counts(max_hops + 1, 0);
  for (const auto& e : tree.entries) ++counts[e.hops];
  HopStats stats;
  stats.mean_hops = sum / static_cast<double>(tree.entries.size());
  stats.cdf.p.resize(max_hops);
  std::size_t running = 0;
  for (std::size_t h = 1; h <= max_hops; ++h) {
    running += counts[h];
    stats.cdf.p[h - 1] = static_cast<double>(running) / static_cast<double>(tree.entries.size());
  }
  return stats;
}

namespace detail {

inline void validate_cdf(const HopCdf& cdf) {
  if (cdf.p.empty()) throw InvalidArgumentError("hop cdf: empty");
  double prev = 0.0;
  for (const double v : cdf.p) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgumentError("hop cdf: value outside [0, 1]");
    if (v < prev) throw InvalidArgumentError("hop cdf: not non-decreasing");
    prev = v;
  }
  if (!(cdf.p.back() > 0.0)) throw InvalidArgumentError("hop cdf: P_max must be positive");
}

}  // namespace detail

// Chandler's expected hop count:
//   E[hops] = max_hops - sum_{n=1}^{max_hops-1} P_n / P_max
// which equals the (P_max-conditional) mean of the hop distribution.
inline double expected_hops_chandler(const HopCdf& cdf) {
  detail::validate_cdf(cdf);
  const std::size_t max_hops = cdf.p.size();
  const double p_max = cdf.p.back();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < max_hops; ++i) sum += cdf.p[i];
  return static_cast<double>(max_hops) - sum / p_max;
}

// Same formula with the CDF truncated at a caller-supplied hop cap.
inline double expected_hops_chandler(const HopCdf& cdf, std::size_t max_allowed_hops) {
  detail::validate_cdf(cdf);
  if (max_allowed_hops < 1)
    throw InvalidArgumentError("expected_hops_chandler: cap must be >= 1");
  const std::size_t m = std::min(max_allowed_hops, cdf.p.size());
  HopCdf capped;
  capped.p.assign(cdf.p.begin(), cdf.p.begin() + m);
  return expected_hops_chandler(capped);
}

}  // namespace wsndct
