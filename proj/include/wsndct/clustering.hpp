#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "wsndct/deployment.hpp"
#include "wsndct/rng.hpp"

namespace wsndct {

enum class ClusterAlgorithm { KMeans, Leach };

struct Cluster {
  int head = -1;
  std::vector<int> members;  // ascending node ids, head included
};

// Exact partition of the deployment's node ids. Clusters are ordered by
// ascending head id.
struct ClusterSet {
  std::vector<Cluster> clusters;
  ClusterAlgorithm algorithm = ClusterAlgorithm::Leach;
  std::uint64_t seed = 0;
};

namespace detail {

// Nearest position in `targets` by squared distance; ties go to the lower index.
inline std::size_t nearest_index(Position p, const std::vector<Position>& targets) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const double d2 = squared_distance(p, targets[j]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  return best;
}

inline ClusterSet group_by_assignment(const std::vector<int>& head_of_node,
                                      ClusterAlgorithm algorithm, std::uint64_t seed) {
  std::map<int, std::vector<int>> groups;  // head id -> members, both ascending
  for (std::size_t id = 0; id < head_of_node.size(); ++id)
    groups[head_of_node[id]].push_back(static_cast<int>(id));
  ClusterSet cs;
  cs.algorithm = algorithm;
  cs.seed = seed;
  cs.clusters.reserve(groups.size());
  for (auto& [head, members] : groups) cs.clusters.push_back(Cluster{head, std::move(members)});
  return cs;
}

}  // namespace detail

// Single-round LEACH election: every node self-elects head with probability
// n_c/N, then each non-head joins the nearest head (ties to the lower head
// id). A zero-head draw is retried with a fresh child seed, at most 64 times.
// The realized cluster count is the elected head count (binomial, not n_c).
inline ClusterSet cluster_leach(const Deployment& deployment, std::size_t n_c,
                                std::uint64_t seed) {
  const std::size_t n = deployment.nodes.size();
  if (n_c < 1 || n_c > n)
    throw InvalidArgumentError("cluster_leach: need 1 <= n_c <= node count");

  const double p = static_cast<double>(n_c) / static_cast<double>(n);
  std::vector<int> heads;
  for (std::uint64_t attempt = 0; attempt < 64 && heads.empty(); ++attempt) {
    Rng rng = Rng(seed).child("leach/election", attempt);
    for (std::size_t id = 0; id < n; ++id)
      if (rng.next_double() < p) heads.push_back(static_cast<int>(id));
  }
  if (heads.empty())
    throw ElectionFailureError("cluster_leach: no head elected after 64 redraws");

  std::vector<Position> head_pos;
  head_pos.reserve(heads.size());
  for (const int h : heads) head_pos.push_back(deployment.nodes[h]);

  std::vector<int> head_of_node(n);
  for (std::size_t id = 0; id < n; ++id)
    head_of_node[id] = heads[detail::nearest_index(deployment.nodes[id], head_pos)];
  for (const int h : heads) head_of_node[h] = h;
  return detail::group_by_assignment(head_of_node, ClusterAlgorithm::Leach, seed);
}

// Lloyd's algorithm on node positions with squared-Euclidean cost.
//
// Initial centroids are n_c distinct nodes sampled without replacement. An
// emptied cluster is reseeded at the node farthest from its assigned centroid.
// Iteration stops at an assignment fixpoint or after max_iters. The head of
// each cluster is the member nearest the final centroid (ties to lower id).
// cost_history, when given, records the total cost after every assignment.
inline ClusterSet cluster_kmeans(const Deployment& deployment, std::size_t n_c,
                                 std::uint64_t seed, std::size_t max_iters = 100,
                                 std::vector<double>* cost_history = nullptr) {
  const std::size_t n = deployment.nodes.size();
  if (n_c < 1 || n_c > n)
    throw InvalidArgumentError("cluster_kmeans: need 1 <= n_c <= node count");
  const auto& nodes = deployment.nodes;

  Rng rng = Rng(seed).child("kmeans/init", 0);
  const auto init_ids = sample_without_replacement(n, n_c, rng);
  std::vector<Position> centroids;
  centroids.reserve(n_c);
  for (const std::size_t id : init_ids) centroids.push_back(nodes[id]);

  std::vector<std::size_t> assign(n);
  const auto assign_all = [&](std::vector<std::size_t>& out) {
    for (std::size_t id = 0; id < n; ++id) out[id] = detail::nearest_index(nodes[id], centroids);
  };
  const auto total_cost = [&](const std::vector<std::size_t>& a) {
    double c = 0.0;
    for (std::size_t id = 0; id < n; ++id) c += squared_distance(nodes[id], centroids[a[id]]);
    return c;
  };

  assign_all(assign);
  if (cost_history) cost_history->push_back(total_cost(assign));

  std::vector<std::size_t> next(n);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    std::vector<double> sx(n_c, 0.0), sy(n_c, 0.0);
    std::vector<std::size_t> count(n_c, 0);
    for (std::size_t id = 0; id < n; ++id) {
      sx[assign[id]] += nodes[id].x;
      sy[assign[id]] += nodes[id].y;
      ++count[assign[id]];
    }
    for (std::size_t j = 0; j < n_c; ++j)
      if (count[j] > 0) centroids[j] = Position{sx[j] / count[j], sy[j] / count[j]};

    // Reseed empty clusters at the node currently farthest from its centroid.
    std::vector<char> taken(n, 0);
    for (std::size_t j = 0; j < n_c; ++j) {
      if (count[j] > 0) continue;
      std::size_t worst = 0;
      double worst_d2 = -1.0;
      for (std::size_t id = 0; id < n; ++id) {
        if (taken[id]) continue;
        const double d2 = squared_distance(nodes[id], centroids[assign[id]]);
        if (d2 > worst_d2) {
          worst_d2 = d2;
          worst = id;
        }
      }
      centroids[j] = nodes[worst];
      taken[worst] = 1;
    }

    assign_all(next);
    if (cost_history) cost_history->push_back(total_cost(next));
    if (next == assign) break;
    std::swap(assign, next);
  }

  // Head = member nearest its cluster centroid, ties to lower id.
  std::vector<int> head_for_cluster(n_c, -1);
  std::vector<double> head_d2(n_c, std::numeric_limits<double>::infinity());
  for (std::size_t id = 0; id < n; ++id) {
    const std::size_t j = assign[id];
    const double d2 = squared_distance(nodes[id], centroids[j]);
    if (d2 < head_d2[j]) {
      head_d2[j] = d2;
      head_for_cluster[j] = static_cast<int>(id);
    }
  }
  std::vector<int> head_of_node(n);
  for (std::size_t id = 0; id < n; ++id) head_of_node[id] = head_for_cluster[assign[id]];
  return detail::group_by_assignment(head_of_node, ClusterAlgorithm::KMeans, seed);
}

struct HistogramBin {
  std::size_t bin_start = 0;  // inclusive lower edge: (size / width) * width
  std::size_t count = 0;
};

// Cluster-size histogram with the given bin width; empty bins are omitted.
inline std::vector<HistogramBin> cluster_size_histogram(const ClusterSet& cs,
                                                        std::size_t bin_width) {
  if (bin_width < 1) throw InvalidArgumentError("cluster_size_histogram: bin width must be >= 1");
  std::map<std::size_t, std::size_t> bins;
  for (const auto& c : cs.clusters) ++bins[(c.members.size() / bin_width) * bin_width];
  std::vector<HistogramBin> out;
  out.reserve(bins.size());
  for (const auto& [start, count] : bins) out.push_back(HistogramBin{start, count});
  return out;
}

}  // namespace wsndct
