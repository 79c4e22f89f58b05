#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "wsndct/rng.hpp"
#include "wsndct/transform.hpp"

using namespace wsndct;

namespace {

double max_abs_gram_deviation(const DctMatrix& m) {
  const std::size_t n = m.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t q = 0; q < n; ++q) dot += m(i, q) * m(j, q);
      worst = std::max(worst, std::fabs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

std::vector<Reading> as_readings(const std::vector<double>& values) {
  std::vector<Reading> r;
  for (std::size_t i = 0; i < values.size(); ++i)
    r.push_back(Reading{static_cast<int>(i), values[i]});
  return r;
}

}  // namespace

TEST_CASE("dct matrix small cases") {
  const DctMatrix one(1);
  REQUIRE(one(0, 0) == Catch::Approx(1.0).epsilon(1e-15));

  const DctMatrix two(2);
  const double r = 0.7071067811865476;
  REQUIRE(two(0, 0) == Catch::Approx(r).epsilon(1e-12));
  REQUIRE(two(0, 1) == Catch::Approx(r).epsilon(1e-12));
  REQUIRE(two(1, 0) == Catch::Approx(r).epsilon(1e-12));
  REQUIRE(two(1, 1) == Catch::Approx(-r).epsilon(1e-12));

  REQUIRE(max_abs_gram_deviation(DctMatrix(8)) < 1e-12);
  REQUIRE_THROWS_AS(DctMatrix(0), InvalidArgumentError);
}

TEST_CASE("dct matrix rows match the defining cosine sum") {
  Rng rng(71);
  std::vector<double> x(16);
  for (auto& v : x) v = rng.uniform(-3.0, 3.0);
  const DctMatrix m(16);
  const auto s = m.forward(x);
  for (std::size_t p = 0; p < 16; ++p)
    REQUIRE(s[p] == Catch::Approx(oracles::dct_coefficient(x, p)).margin(1e-12));
}

TEST_CASE("cached matrices behave like fresh ones") {
  const auto cached = dct_matrix_cached(12);
  const DctMatrix fresh(12);
  for (std::size_t p = 0; p < 12; ++p)
    for (std::size_t q = 0; q < 12; ++q) REQUIRE((*cached)(p, q) == fresh(p, q));
  REQUIRE(dct_matrix_cached(12).get() == cached.get());
}

TEST_CASE("constant cluster compresses to its DC coefficient") {
  const auto readings = as_readings({5.0, 5.0, 5.0, 5.0});
  for (const auto selection : {SelectionMode::FirstK, SelectionMode::TopKMagnitude}) {
    for (const auto sort : {SortMode::None, SortMode::Descending, SortMode::Ascending}) {
      const auto payload = compress_cluster(readings, 1, sort, selection);
      REQUIRE(payload.kept.size() == 1);
      REQUIRE(payload.kept[0].index == 0);
      REQUIRE(payload.kept[0].value == Catch::Approx(10.0).epsilon(1e-12));

      const auto recon = reconstruct_cluster(payload);
      for (const auto& r : recon) REQUIRE(r.value == Catch::Approx(5.0).margin(1e-12));
    }
  }
}

TEST_CASE("full-rank compression preserves energy and readings") {
  Rng rng(123);
  std::vector<double> values(24);
  for (auto& v : values) v = rng.uniform(-10.0, 10.0);
  const auto readings = as_readings(values);

  const auto payload =
      compress_cluster(readings, values.size(), SortMode::Descending, SelectionMode::FirstK);
  double coeff_energy = 0.0;
  for (const auto& kc : payload.kept) coeff_energy += kc.value * kc.value;
  double signal_energy = 0.0;
  for (const double v : values) signal_energy += v * v;
  REQUIRE(coeff_energy == Catch::Approx(signal_energy).epsilon(1e-9));

  const auto recon = reconstruct_cluster(payload);
  for (std::size_t i = 0; i < values.size(); ++i) {
    REQUIRE(recon[i].node_id == static_cast<int>(i));  // permutation round trip
    REQUIRE(std::fabs(recon[i].value - values[i]) < 1e-10);
  }
}

TEST_CASE("top-k selection matches the brute-force coefficient ranking") {
  const auto readings = as_readings({1.0, 2.0, 3.0, 4.0});
  const auto payload =
      compress_cluster(readings, 2, SortMode::Descending, SelectionMode::TopKMagnitude);

  const std::vector<double> sorted{4.0, 3.0, 2.0, 1.0};
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t p = 0; p < 4; ++p)
    ranked.push_back({std::fabs(oracles::dct_coefficient(sorted, p)), p});
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::size_t> expected{ranked[0].second, ranked[1].second};
  std::sort(expected.begin(), expected.end());

  REQUIRE(payload.kept.size() == 2);
  REQUIRE(payload.kept[0].index == expected[0]);
  REQUIRE(payload.kept[1].index == expected[1]);
  for (const auto& kc : payload.kept)
    REQUIRE(kc.value ==
            Catch::Approx(oracles::dct_coefficient(sorted, kc.index)).margin(1e-12));
}

TEST_CASE("zeroed coefficients reconstruct to zero") {
  auto payload = compress_cluster(as_readings({1.0, -2.0, 7.0}), 2, SortMode::None,
                                  SelectionMode::TopKMagnitude);
  for (auto& kc : payload.kept) kc.value = 0.0;
  for (const auto& r : reconstruct_cluster(payload)) REQUIRE(r.value == 0.0);
}

TEST_CASE("normalized error basics") {
  const std::vector<double> x{3.0, 4.0};
  REQUIRE(normalized_error(x, x) == 0.0);
  REQUIRE(normalized_error(x, std::vector<double>{0.0, 0.0}) == Catch::Approx(1.0));
  REQUIRE(normalized_error(x, std::vector<double>{0.0, 4.0}) == Catch::Approx(0.6));
  REQUIRE_THROWS_AS(normalized_error(x, std::vector<double>{1.0}), InvalidArgumentError);
  REQUIRE_THROWS_AS(normalized_error(std::vector<double>{0.0, 0.0}, x), UndefinedMetricError);
}

TEST_CASE("residual energy equals the dropped coefficient energy") {
  Rng rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.below(63));
    const std::size_t k = 1 + static_cast<std::size_t>(rng.below(n));
    std::vector<double> values(n);
    for (auto& v : values) v = rng.uniform(-5.0, 5.0);
    const auto readings = as_readings(values);

    const auto payload =
        compress_cluster(readings, k, SortMode::Descending, SelectionMode::TopKMagnitude);
    const auto recon = reconstruct_cluster(payload);

    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = values[i] - recon[i].value;
      residual += d * d;
    }

    // dropped energy = total energy - kept energy (orthonormal rows)
    double total = 0.0;
    for (const double v : values) total += v * v;
    double kept = 0.0;
    for (const auto& kc : payload.kept) kept += kc.value * kc.value;
    const double dropped = total - kept;
    REQUIRE(residual == Catch::Approx(dropped).margin(1e-9 * std::max(1.0, total)));
  }
}

TEST_CASE("error is non-increasing in k for both selection modes") {
  Rng rng(31415);
  std::vector<double> values(40);
  for (auto& v : values) v = rng.uniform(0.0, 20.0);
  const auto readings = as_readings(values);

  for (const auto selection : {SelectionMode::FirstK, SelectionMode::TopKMagnitude}) {
    double previous = 1e300;
    for (std::size_t k = 1; k <= values.size(); ++k) {
      const auto payload = compress_cluster(readings, k, SortMode::Descending, selection);
      const auto recon = reconstruct_cluster(payload);
      std::vector<double> x_hat(values.size());
      for (std::size_t i = 0; i < recon.size(); ++i) x_hat[i] = recon[i].value;
      const double err = normalized_error(values, x_hat);
      REQUIRE(err <= previous + 1e-12);
      previous = err;
    }
  }
}

TEST_CASE("ascending and descending sorts give the same top-k error") {
  Rng rng(999);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng.below(30));
    std::vector<double> values(n);
    for (auto& v : values) v = rng.uniform(-8.0, 8.0);
    const auto readings = as_readings(values);
    const std::size_t k = 1 + static_cast<std::size_t>(rng.below(n));

    double errors[2];
    int slot = 0;
    for (const auto sort : {SortMode::Ascending, SortMode::Descending}) {
      const auto recon =
          reconstruct_cluster(compress_cluster(readings, k, sort, SelectionMode::TopKMagnitude));
      std::vector<double> x_hat(n);
      for (std::size_t i = 0; i < n; ++i) x_hat[i] = recon[i].value;
      errors[slot++] = normalized_error(values, x_hat);
    }
    REQUIRE(errors[0] == Catch::Approx(errors[1]).margin(1e-12));
  }
}

TEST_CASE("sorting concentrates energy: sorted error <= unsorted on smooth data") {
  Rng rng(777);
  double sorted_sum = 0.0, unsorted_sum = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    // smooth profile sampled at jittered positions, then shuffled by node id
    std::vector<double> values(60);
    const double a = rng.uniform(5.0, 15.0), b = rng.uniform(0.5, 2.0);
    for (std::size_t i = 0; i < values.size(); ++i)
      values[i] = a + b * std::sin(0.11 * static_cast<double>(i)) +
                  rng.uniform(-0.05, 0.05);
    const auto readings = as_readings(values);
    const std::size_t k = 6;

    for (const auto sort : {SortMode::Descending, SortMode::None}) {
      const auto recon =
          reconstruct_cluster(compress_cluster(readings, k, sort, SelectionMode::TopKMagnitude));
      std::vector<double> x_hat(values.size());
      for (std::size_t i = 0; i < recon.size(); ++i) x_hat[i] = recon[i].value;
      const double err = normalized_error(values, x_hat);
      (sort == SortMode::Descending ? sorted_sum : unsorted_sum) += err;
    }
  }
  REQUIRE(sorted_sum <= unsorted_sum);
}

TEST_CASE("compress and reconstruct input validation") {
  const auto readings = as_readings({1.0, 2.0});
  REQUIRE_THROWS_AS(compress_cluster(readings, 0, SortMode::None, SelectionMode::FirstK),
                    InvalidArgumentError);
  REQUIRE_THROWS_AS(compress_cluster(readings, 3, SortMode::None, SelectionMode::FirstK),
                    InvalidArgumentError);

  std::vector<Reading> bad{{0, 1.0}, {1, std::nan("")}};
  REQUIRE_THROWS_AS(compress_cluster(bad, 1, SortMode::None, SelectionMode::FirstK),
                    InvalidDataError);
  std::vector<Reading> dup{{3, 1.0}, {3, 2.0}};
  REQUIRE_THROWS_AS(compress_cluster(dup, 1, SortMode::None, SelectionMode::FirstK),
                    InvalidDataError);

  auto payload = compress_cluster(readings, 1, SortMode::None, SelectionMode::FirstK);
  auto broken = payload;
  broken.kept.push_back(broken.kept[0]);  // duplicate index
  REQUIRE_THROWS_AS(reconstruct_cluster(broken), InvalidDataError);
  broken = payload;
  broken.permutation.pop_back();
  REQUIRE_THROWS_AS(reconstruct_cluster(broken), InvalidDataError);
  broken = payload;
  broken.kept[0].index = 5;
  REQUIRE_THROWS_AS(reconstruct_cluster(broken), InvalidDataError);
  broken = payload;
  broken.permutation = {4, 4};
  REQUIRE_THROWS_AS(reconstruct_cluster(broken), InvalidDataError);
}

TEST_CASE("budget allocation is proportional with largest-remainder repair") {
  {
    const std::vector<std::size_t> sizes{20, 20, 20, 20, 20};
    const auto k = allocate_budget(10, sizes);
    for (const auto v : k) REQUIRE(v == 2);
  }
  {
    const std::vector<std::size_t> sizes{30, 10, 10};
    const auto k = allocate_budget(10, sizes);
    REQUIRE(k == std::vector<std::size_t>{6, 2, 2});
  }
  {
    // floor would starve a cluster; the >=1 raise kicks in
    const std::vector<std::size_t> sizes{1, 1, 1, 9};
    const auto k = allocate_budget(4, sizes);
    std::size_t sum = 0;
    for (const auto v : k) {
      REQUIRE(v >= 1);
      sum += v;
    }
    REQUIRE(sum == 4);
  }
  {
    // budget below the cluster count: zeros are allowed, sum still exact
    const std::vector<std::size_t> sizes{5, 5, 5, 5};
    const auto k = allocate_budget(2, sizes);
    std::size_t sum = 0;
    for (const auto v : k) sum += v;
    REQUIRE(sum == 2);
  }
  {
    // full budget returns every reading
    const std::vector<std::size_t> sizes{3, 7, 2};
    const auto k = allocate_budget(12, sizes);
    REQUIRE(k == std::vector<std::size_t>{3, 7, 2});
  }
  {
    // k_i never exceeds n_i
    const std::vector<std::size_t> sizes{2, 98};
    const auto k = allocate_budget(50, sizes);
    REQUIRE(k[0] <= 2);
    REQUIRE(k[0] + k[1] == 50);
  }
  const std::vector<std::size_t> sizes{4, 4};
  REQUIRE_THROWS_AS(allocate_budget(9, sizes), InvalidArgumentError);
  REQUIRE_THROWS_AS(allocate_budget(0, sizes), InvalidArgumentError);
  REQUIRE_THROWS_AS(allocate_budget(1, std::vector<std::size_t>{}), InvalidArgumentError);
}
