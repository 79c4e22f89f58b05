#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "wsndct/clustering.hpp"
#include "wsndct/routing.hpp"
#include "wsndct/rng.hpp"

using namespace wsndct;

TEST_CASE("heads in range of the BS attach directly") {
  const std::vector<ChPosition> heads{{0, {5, 0}}, {1, {9, 0}}};
  for (const auto strategy : {RouteStrategy::BfsMinHop, RouteStrategy::GreedyTowardBs}) {
    const auto tree = build_routing_tree(heads, Position{0, 0}, 10.0, strategy);
    REQUIRE(tree.unreachable.empty());
    REQUIRE(tree.entries.size() == 2);
    for (const auto& e : tree.entries) {
      REQUIRE(e.parent_id == -1);
      REQUIRE(e.hops == 1);
    }
  }
}

TEST_CASE("a far head relays through a near one") {
  const std::vector<ChPosition> heads{{7, {10, 0}}, {9, {19, 0}}};
  for (const auto strategy : {RouteStrategy::BfsMinHop, RouteStrategy::GreedyTowardBs}) {
    const auto tree = build_routing_tree(heads, Position{0, 0}, 10.0, strategy);
    const auto* a = tree.find(7);
    const auto* b = tree.find(9);
    REQUIRE(a != nullptr);
    REQUIRE(b != nullptr);
    REQUIRE(a->hops == 1);
    REQUIRE(a->parent_id == -1);
    REQUIRE(b->hops == 2);
    REQUIRE(b->parent_id == 7);
    REQUIRE(b->edge_length == Catch::Approx(9.0));
  }
}

TEST_CASE("heads with no in-range neighbor are reported unreachable") {
  const std::vector<ChPosition> heads{{4, {30, 0}}};
  const auto tree = build_routing_tree(heads, Position{0, 0}, 10.0, RouteStrategy::BfsMinHop);
  REQUIRE(tree.entries.empty());
  REQUIRE(tree.unreachable == std::vector<int>{4});
  REQUIRE_THROWS_AS(hop_statistics(tree), NoStatisticsError);
  REQUIRE_THROWS_AS(build_routing_tree(heads, Position{0, 0}, 0.0, RouteStrategy::BfsMinHop),
                    InvalidArgumentError);
}

TEST_CASE("hop statistics summarize the tree") {
  const auto stats_for = [](std::vector<std::size_t> hop_counts) {
    RoutingTree tree;
    tree.range_r = 1.0;
    for (std::size_t i = 0; i < hop_counts.size(); ++i)
      tree.entries.push_back(RoutingTree::Entry{static_cast<int>(i), -1, hop_counts[i], 1.0});
    return hop_statistics(tree);
  };

  const auto s1 = stats_for({1, 1});
  REQUIRE(s1.mean_hops == Catch::Approx(1.0));
  REQUIRE(s1.cdf.p == std::vector<double>{1.0});

  const auto s2 = stats_for({1, 2});
  REQUIRE(s2.mean_hops == Catch::Approx(1.5));
  REQUIRE(s2.cdf.p == std::vector<double>{0.5, 1.0});

  const auto s3 = stats_for({1, 2, 2, 3});
  REQUIRE(s3.mean_hops == Catch::Approx(2.0));
  REQUIRE(s3.cdf.p == std::vector<double>{0.25, 0.75, 1.0});
}

TEST_CASE("chandler expected hops on known CDFs") {
  REQUIRE(expected_hops_chandler(HopCdf{{1.0}}) == Catch::Approx(1.0));
  REQUIRE(expected_hops_chandler(HopCdf{{0.2, 0.7, 1.0}}) == Catch::Approx(2.1));
  REQUIRE(expected_hops_chandler(HopCdf{{0.5, 1.0}}) == Catch::Approx(1.5));

  REQUIRE_THROWS_AS(expected_hops_chandler(HopCdf{{}}), InvalidArgumentError);
  REQUIRE_THROWS_AS(expected_hops_chandler(HopCdf{{0.0}}), InvalidArgumentError);
  REQUIRE_THROWS_AS(expected_hops_chandler(HopCdf{{0.5, 0.4}}), InvalidArgumentError);
  REQUIRE_THROWS_AS(expected_hops_chandler(HopCdf{{0.5, 1.2}}), InvalidArgumentError);
}

TEST_CASE("chandler equals the distribution mean on random CDFs") {
  Rng rng(606);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t max_hops = 1 + rng.below(10);
    HopCdf cdf;
    double acc = 0.0;
    for (std::size_t i = 0; i < max_hops; ++i) {
      acc += rng.uniform(0.01, 1.0);
      cdf.p.push_back(acc);
    }
    for (auto& v : cdf.p) v /= acc;  // P_max = 1 here
    REQUIRE(expected_hops_chandler(cdf) ==
            Catch::Approx(oracles::distribution_mean(cdf.p)).margin(1e-12));
  }
}

TEST_CASE("capped chandler uses the truncated CDF") {
  const HopCdf cdf{{0.2, 0.7, 1.0}};
  REQUIRE(expected_hops_chandler(cdf, 2) == Catch::Approx(2.0 - 0.2 / 0.7));
  REQUIRE(expected_hops_chandler(cdf, 10) == Catch::Approx(2.1));
  REQUIRE_THROWS_AS(expected_hops_chandler(cdf, 0), InvalidArgumentError);
}

TEST_CASE("bfs hop counts match the exhaustive shortest-path oracle") {
  Rng rng(8080);
  for (int instance = 0; instance < 30; ++instance) {
    const std::size_t m = 2 + rng.below(11);
    std::vector<ChPosition> heads;
    std::vector<oracles::Point> points;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = rng.uniform(-50.0, 50.0);
      const double y = rng.uniform(-50.0, 50.0);
      heads.push_back(ChPosition{static_cast<int>(i), {x, y}});
      points.push_back(oracles::Point{x, y});
    }
    const double range = rng.uniform(10.0, 60.0);
    const auto tree = build_routing_tree(heads, Position{0, 0}, range, RouteStrategy::BfsMinHop);
    const auto oracle = oracles::min_hops_from_root(points, oracles::Point{0, 0}, range);
    for (std::size_t i = 0; i < m; ++i) {
      const auto* entry = tree.find(static_cast<int>(i));
      if (oracle[i] < 0) {
        REQUIRE(entry == nullptr);
      } else {
        REQUIRE(entry != nullptr);
        REQUIRE(entry->hops == static_cast<std::size_t>(oracle[i]));
      }
    }
  }
}

TEST_CASE("greedy never beats bfs hop counts and respects the range") {
  Rng rng(9090);
  for (int instance = 0; instance < 20; ++instance) {
    const std::size_t m = 3 + rng.below(40);
    std::vector<ChPosition> heads;
    for (std::size_t i = 0; i < m; ++i)
      heads.push_back(
          ChPosition{static_cast<int>(i), {rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0)}});
    const double range = rng.uniform(15.0, 45.0);
    const auto bfs = build_routing_tree(heads, Position{0, 0}, range, RouteStrategy::BfsMinHop);
    const auto greedy =
        build_routing_tree(heads, Position{0, 0}, range, RouteStrategy::GreedyTowardBs);

    for (const auto& e : greedy.entries) {
      REQUIRE(e.edge_length <= range + 1e-9);
      const auto* b = bfs.find(e.ch_id);
      REQUIRE(b != nullptr);
      REQUIRE(e.hops >= b->hops);
      // parent links terminate at the BS and hop counts telescope
      std::size_t steps = 0;
      const RoutingTree::Entry* cur = &e;
      while (cur->parent_id >= 0) {
        const auto* parent = greedy.find(cur->parent_id);
        REQUIRE(parent != nullptr);
        REQUIRE(cur->hops == parent->hops + 1);
        cur = parent;
        REQUIRE(++steps < m + 1);
      }
      REQUIRE(cur->hops == 1);
    }
    for (const auto& e : bfs.entries) REQUIRE(e.edge_length <= range + 1e-9);
  }
}

TEST_CASE("paper range schedule keeps nearly all heads connected") {
  const std::vector<std::size_t> n_c{10, 50, 100, 200, 300};
  const std::vector<double> ranges{50.0, 30.0, 25.0, 22.0, 18.0};
  double unreachable_fraction_sum = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < n_c.size(); ++i) {
    for (std::uint64_t t = 0; t < 10; ++t) {
      const auto dep = deploy(AreaGeometry::disk(50.0), 2000, std::nullopt, 7000 + t);
      const auto cs = cluster_leach(dep, n_c[i], 8000 + t);
      std::vector<ChPosition> heads;
      for (const auto& c : cs.clusters) heads.push_back(ChPosition{c.head, dep.nodes[c.head]});
      const auto tree =
          build_routing_tree(heads, dep.bs, ranges[i], RouteStrategy::BfsMinHop);
      unreachable_fraction_sum += static_cast<double>(tree.unreachable.size()) /
                                  static_cast<double>(cs.clusters.size());
      ++cells;
    }
  }
  REQUIRE(unreachable_fraction_sum / static_cast<double>(cells) < 0.05);
}
