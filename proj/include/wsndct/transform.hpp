#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wsndct/error.hpp"

namespace wsndct {

// Orthonormal DCT-II matrix:
//   row 0:     1/sqrt(n)
//   row p>=1:  sqrt(2/n) * cos(pi * (2q+1) * p / (2n))
// Rows form an orthonormal basis, so the inverse is the transpose.
class DctMatrix {
 public:
  explicit DctMatrix(std::size_t n) : n_(n), a_(n * n) {
    if (n == 0) throw InvalidArgumentError("DctMatrix: dimension must be positive");
    const double dc = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t q = 0; q < n; ++q) a_[q] = dc;
    const double scale = std::sqrt(2.0 / static_cast<double>(n));
    for (std::size_t p = 1; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        a_[p * n + q] =
            scale * std::cos(std::numbers::pi * (2.0 * q + 1.0) * p / (2.0 * n));
  }

  std::size_t size() const { return n_; }

  double operator()(std::size_t p, std::size_t q) const { return a_[p * n_ + q]; }

  // s = Phi * x
  std::vector<double> forward(std::span<const double> x) const {
    if (x.size() != n_) throw InvalidArgumentError("DctMatrix::forward: size mismatch");
    std::vector<double> s(n_, 0.0);
    for (std::size_t p = 0; p < n_; ++p) {
      double acc = 0.0;
      const double* row = a_.data() + p * n_;
      for (std::size_t q = 0; q < n_; ++q) acc += row[q] * x[q];
      s[p] = acc;
    }
    return s;
  }

  // x = Phi^T * s
  std::vector<double> inverse(std::span<const double> s) const {
    if (s.size() != n_) throw InvalidArgumentError("DctMatrix::inverse: size mismatch");
    std::vector<double> x(n_, 0.0);
    for (std::size_t p = 0; p < n_; ++p) {
      const double sp = s[p];
      if (sp == 0.0) continue;
      const double* row = a_.data() + p * n_;
      for (std::size_t q = 0; q < n_; ++q) x[q] += row[q] * sp;
    }
    return x;
  }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

// Shared memo keyed by dimension; observationally identical to constructing
// a fresh matrix.
inline std::shared_ptr<const DctMatrix> dct_matrix_cached(std::size_t n) {
  if (n == 0) throw InvalidArgumentError("dct_matrix_cached: dimension must be positive");
  static std::mutex mutex;
  static std::unordered_map<std::size_t, std::shared_ptr<const DctMatrix>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const DctMatrix>(n);
  return slot;
}

enum class SortMode { None, Descending, Ascending };
enum class SelectionMode { FirstK, TopKMagnitude };

struct Reading {
  int node_id = 0;
  double value = 0.0;
};

struct KeptCoefficient {
  std::size_t index = 0;
  double value = 0.0;
};

// Kept DCT coefficients of one cluster plus the bookkeeping needed to undo
// the sort at the base station.
struct CompressedPayload {
  std::size_t n = 0;                    // cluster size
  std::vector<KeptCoefficient> kept;    // ascending coefficient index
  std::vector<int> permutation;         // sorted position -> node id
  SortMode sort_mode = SortMode::None;
  SelectionMode selection_mode = SelectionMode::TopKMagnitude;
};

// Order readings per sort_mode, transform, and keep k coefficients: the first
// k (FirstK) or the k largest by magnitude (TopKMagnitude). All tie-breaks are
// deterministic (value ties -> ascending node id; magnitude ties -> lower
// index), which makes kept index sets nested in k.
inline CompressedPayload compress_cluster(std::span<const Reading> readings, std::size_t k,
                                          SortMode sort_mode, SelectionMode selection_mode) {
  const std::size_t n = readings.size();
  if (n == 0 || k < 1 || k > n)
    throw InvalidArgumentError("compress_cluster: need 1 <= k <= reading count");
  {
    std::unordered_set<int> ids;
    for (const auto& r : readings) {
      if (!std::isfinite(r.value))
        throw InvalidDataError("compress_cluster: non-finite reading for node " +
                               std::to_string(r.node_id));
      if (!ids.insert(r.node_id).second)
        throw InvalidDataError("compress_cluster: duplicate node id " +
                               std::to_string(r.node_id));
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  if (sort_mode == SortMode::Descending) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (readings[a].value != readings[b].value) return readings[a].value > readings[b].value;
      return readings[a].node_id < readings[b].node_id;
    });
  } else if (sort_mode == SortMode::Ascending) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (readings[a].value != readings[b].value) return readings[a].value < readings[b].value;
      return readings[a].node_id < readings[b].node_id;
    });
  }

  std::vector<double> x(n);
  std::vector<int> permutation(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    x[pos] = readings[order[pos]].value;
    permutation[pos] = readings[order[pos]].node_id;
  }

  const auto phi = dct_matrix_cached(n);
  const std::vector<double> s = phi->forward(x);

  std::vector<std::size_t> selected;
  selected.reserve(k);
  if (selection_mode == SelectionMode::FirstK) {
    for (std::size_t i = 0; i < k; ++i) selected.push_back(i);
  } else {
    std::vector<std::size_t> by_magnitude(n);
    for (std::size_t i = 0; i < n; ++i) by_magnitude[i] = i;
    std::sort(by_magnitude.begin(), by_magnitude.end(), [&](std::size_t a, std::size_t b) {
      const double ma = std::fabs(s[a]), mb = std::fabs(s[b]);
      if (ma != mb) return ma > mb;
      return a < b;
    });
    selected.assign(by_magnitude.begin(), by_magnitude.begin() + k);
    std::sort(selected.begin(), selected.end());
  }

  CompressedPayload payload;
  payload.n = n;
  payload.kept.reserve(k);
  for (const std::size_t idx : selected) payload.kept.push_back(KeptCoefficient{idx, s[idx]});
  payload.permutation = std::move(permutation);
  payload.sort_mode = sort_mode;
  payload.selection_mode = selection_mode;
  return payload;
}

namespace detail {

inline void validate_payload(const CompressedPayload& p) {
  if (p.n == 0) throw InvalidDataError("payload: empty cluster");
  if (p.kept.empty() || p.kept.size() > p.n)
    throw InvalidDataError("payload: kept count out of range");
  std::unordered_set<std::size_t> indices;
  for (const auto& kc : p.kept) {
    if (kc.index >= p.n) throw InvalidDataError("payload: coefficient index out of range");
    if (!indices.insert(kc.index).second)
      throw InvalidDataError("payload: duplicate coefficient index");
    if (!std::isfinite(kc.value)) throw InvalidDataError("payload: non-finite coefficient");
  }
  if (p.permutation.size() != p.n)
    throw InvalidDataError("payload: permutation size mismatch");
  std::unordered_set<int> ids;
  for (const int id : p.permutation)
    if (!ids.insert(id).second) throw InvalidDataError("payload: permutation is not a bijection");
}

}  // namespace detail

// Zero-pad the kept coefficients, apply the transpose, and undo the sort.
// Output is ordered by ascending node id.
inline std::vector<Reading> reconstruct_cluster(const CompressedPayload& payload) {
  detail::validate_payload(payload);
  const std::size_t n = payload.n;
  const auto phi = dct_matrix_cached(n);

  std::vector<double> x_sorted(n, 0.0);
  for (const auto& kc : payload.kept) {
    if (kc.value == 0.0) continue;
    for (std::size_t q = 0; q < n; ++q) x_sorted[q] += (*phi)(kc.index, q) * kc.value;
  }

  std::vector<Reading> out;
  out.reserve(n);
  for (std::size_t pos = 0; pos < n; ++pos)
    out.push_back(Reading{payload.permutation[pos], x_sorted[pos]});
  std::sort(out.begin(), out.end(),
            [](const Reading& a, const Reading& b) { return a.node_id < b.node_id; });
  return out;
}

// ||x - x_hat||_2 / ||x||_2
inline double normalized_error(std::span<const double> x, std::span<const double> x_hat) {
  if (x.size() != x_hat.size())
    throw InvalidArgumentError("normalized_error: length mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - x_hat[i];
    num += d * d;
    den += x[i] * x[i];
  }
  if (den == 0.0) throw UndefinedMetricError("normalized_error: reference signal has zero norm");
  return std::sqrt(num / den);
}

// Split a global coefficient budget across clusters proportionally to size
// (largest-remainder rounding, ties to the lower cluster index). Guarantees
// sum(k_i) = k_total and k_i <= n_i. When k_total >= cluster count every k_i
// is at least 1; smaller budgets leave the smallest-quota clusters at zero.
inline std::vector<std::size_t> allocate_budget(std::size_t k_total,
                                                std::span<const std::size_t> cluster_sizes) {
  const std::size_t m = cluster_sizes.size();
  if (m == 0) throw InvalidArgumentError("allocate_budget: no clusters");
  std::size_t n_total = 0;
  for (const std::size_t s : cluster_sizes) {
    if (s == 0) throw InvalidArgumentError("allocate_budget: empty cluster");
    n_total += s;
  }
  if (k_total < 1 || k_total > n_total)
    throw InvalidArgumentError("allocate_budget: need 1 <= k_total <= total readings");

  std::vector<std::size_t> k(m, 0);
  std::vector<std::pair<double, std::size_t>> remainder(m);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double quota = static_cast<double>(k_total) * cluster_sizes[i] / n_total;
    k[i] = static_cast<std::size_t>(quota);
    remainder[i] = {quota - static_cast<double>(k[i]), i};
    assigned += k[i];
  }
  std::sort(remainder.begin(), remainder.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t r = 0; r < k_total - assigned; ++r) ++k[remainder[r].second];

  // Bound repair: k_i <= n_i always; k_i >= 1 when the budget allows it.
  long long surplus = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (k[i] > cluster_sizes[i]) {
      surplus += static_cast<long long>(k[i] - cluster_sizes[i]);
      k[i] = cluster_sizes[i];
    }
  }
  if (k_total >= m) {
    for (std::size_t i = 0; i < m; ++i) {
      if (k[i] == 0) {
        k[i] = 1;
        --surplus;
      }
    }
  }
  while (surplus > 0) {  // give to the cluster with the most slack
    std::size_t best = m;
    std::size_t best_slack = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t slack = cluster_sizes[i] - k[i];
      if (slack > best_slack) {
        best_slack = slack;
        best = i;
      }
    }
    ++k[best];
    --surplus;
  }
  const std::size_t floor = k_total >= m ? 1 : 0;
  while (surplus < 0) {  // take from the largest allocation above the floor
    std::size_t best = m;
    std::size_t best_k = floor;
    for (std::size_t i = 0; i < m; ++i) {
      if (k[i] > best_k) {
        best_k = k[i];
        best = i;
      }
    }
    --k[best];
    ++surplus;
  }
  return k;
}

}  // namespace wsndct
