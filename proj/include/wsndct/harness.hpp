#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "wsndct/config.hpp"
#include "wsndct/csv.hpp"
#include "wsndct/energy.hpp"
#include "wsndct/signals.hpp"

namespace wsndct {

// One point of the sweep grid. range_r is only meaningful for multihop cells.
struct CellKey {
  ClusterAlgorithm algorithm = ClusterAlgorithm::Leach;
  std::size_t n_c = 1;
  double range_r = 0.0;
  double sigma = 0.0;
  std::size_t k_budget = 1;
  RouteKind route = RouteKind::Direct;
};

struct AnalyticReport {
  double intra = 0.0;
  double to_bs = 0.0;
  double total = 0.0;
};

struct TrialResult {
  CellKey cell;
  std::size_t trial_index = 0;
  std::size_t realized_n_c = 0;
  std::vector<std::size_t> cluster_sizes;
  EnergyReport energy;
  std::optional<AnalyticReport> analytic;  // alpha = 2 only
  std::optional<double> mean_hops;         // multihop only
  double normalized_err = 0.0;
  std::size_t unreachable_count = 0;
  bool partial = false;  // multihop trial with unreachable heads, no fallback
  std::uint64_t seed = 0;
};

namespace harness_detail {

// All per-trial randomness descends from (master_seed, trial_index) only, so
// cells that differ in n_c / K / sigma / route share deployments, fields and
// election draws at equal trial index.
struct TrialSeeds {
  std::uint64_t trial = 0, deploy = 0, field = 0, cluster = 0, noise = 0, channel = 0;

  TrialSeeds(std::uint64_t master_seed, std::size_t trial_index) {
    trial = Rng::derive(master_seed, "trial", trial_index);
    deploy = Rng::derive(trial, "deploy", 0);
    field = Rng::derive(trial, "field", 0);
    cluster = Rng::derive(trial, "cluster", 0);
    noise = Rng::derive(trial, "noise", 0);
    channel = Rng::derive(trial, "channel", 0);
  }
};

inline std::vector<Reading> true_readings(const ExperimentConfig& cfg, const Deployment& dep,
                                          std::uint64_t field_seed) {
  switch (cfg.field_kind) {
    case FieldKind::GaussianBumps:
      return sample_field(make_random_bumps(cfg.geometry, cfg.bump_count, cfg.amp_min,
                                            cfg.amp_max, cfg.width_min_frac, cfg.width_max_frac,
                                            field_seed),
                          dep);
    case FieldKind::LowFreqFourier:
      return sample_field(
          make_random_fourier(cfg.geometry, cfg.fourier_cutoff, cfg.fourier_amplitude, field_seed),
          dep);
    case FieldKind::Trace: {
      auto readings = load_trace_csv(cfg.trace_path, cfg.trace_epoch);
      if (readings.size() != dep.nodes.size())
        throw InvalidArgumentError("trace epoch has " + std::to_string(readings.size()) +
                                   " readings, deployment has " +
                                   std::to_string(dep.nodes.size()) + " nodes");
      for (std::size_t i = 0; i < readings.size(); ++i)
        if (readings[i].node_id != static_cast<int>(i))
          throw InvalidArgumentError("trace node ids must be 0..N-1");
      return readings;
    }
  }
  throw Error("unreachable field kind");
}

}  // namespace harness_detail

// Stage results of one trial, exposed for the inspect CLI.
struct TrialArtifacts {
  Deployment deployment;
  ClusterSet clusters;
  std::vector<std::size_t> k_alloc;
  std::vector<CompressedPayload> payloads;  // empty payload where k_i = 0
  std::optional<RoutingTree> tree;
};

// Deploy -> read -> add noise -> cluster -> allocate k_i -> compress ->
// route -> account energy -> reconstruct -> global error.
//
// The reconstruction error is measured against the noiseless readings, so
// kept coefficients carry any injected noise into the estimate.
inline TrialResult run_trial(const ExperimentConfig& cfg, const CellKey& cell,
                             std::size_t trial_index, TrialArtifacts* artifacts = nullptr) {
  const harness_detail::TrialSeeds seeds(cfg.master_seed, trial_index);

  Deployment dep = deploy(cfg.geometry, cfg.n_nodes, cfg.bs_li, seeds.deploy);
  const std::vector<Reading> truth = harness_detail::true_readings(cfg, dep, seeds.field);
  const std::vector<Reading> readings = add_noise(truth, NoiseSpec{cell.sigma, seeds.noise});

  ClusterSet clusters = cell.algorithm == ClusterAlgorithm::KMeans
                            ? cluster_kmeans(dep, cell.n_c, seeds.cluster, cfg.kmeans_max_iters)
                            : cluster_leach(dep, cell.n_c, seeds.cluster);

  std::vector<std::size_t> sizes;
  sizes.reserve(clusters.clusters.size());
  for (const auto& c : clusters.clusters) sizes.push_back(c.members.size());
  const std::vector<std::size_t> k_alloc = allocate_budget(cell.k_budget, sizes);

  Rng channel_rng = Rng(seeds.channel).child("channel/gaussian", 0);
  const std::size_t n = dep.nodes.size();
  std::vector<double> x_true(n), x_hat(n, 0.0);
  for (std::size_t id = 0; id < n; ++id) x_true[id] = truth[id].value;

  std::vector<CompressedPayload> payloads(clusters.clusters.size());
  std::vector<Reading> cluster_readings;
  for (std::size_t i = 0; i < clusters.clusters.size(); ++i) {
    if (k_alloc[i] == 0) continue;  // cluster sends nothing; estimates stay zero
    const Cluster& cluster = clusters.clusters[i];
    cluster_readings.clear();
    for (const int id : cluster.members) cluster_readings.push_back(readings[id]);
    CompressedPayload payload =
        compress_cluster(cluster_readings, k_alloc[i], cfg.sort_mode, cfg.selection_mode);
    if (cfg.channel_sigma > 0.0)
      for (auto& kc : payload.kept) kc.value += cfg.channel_sigma * channel_rng.normal();
    for (const Reading& r : reconstruct_cluster(payload)) x_hat[r.node_id] = r.value;
    payloads[i] = std::move(payload);
  }

  TrialResult result;
  result.cell = cell;
  result.trial_index = trial_index;
  result.realized_n_c = clusters.clusters.size();
  result.cluster_sizes = sizes;
  result.seed = seeds.trial;
  result.normalized_err = normalized_error(x_true, x_hat);

  RouteSpec route;
  std::optional<RoutingTree> tree;
  std::optional<HopStats> hop_stats;
  if (cell.route == RouteKind::Multihop) {
    std::vector<ChPosition> heads;
    heads.reserve(clusters.clusters.size());
    for (const auto& c : clusters.clusters)
      heads.push_back(ChPosition{c.head, dep.nodes[c.head]});
    tree = build_routing_tree(heads, dep.bs, cell.range_r, cfg.route_strategy);
    result.unreachable_count = tree->unreachable.size();
    result.partial = result.unreachable_count > 0 && !cfg.fallback_direct;
    if (!tree->entries.empty()) {
      hop_stats = hop_statistics(*tree);
      result.mean_hops = hop_stats->mean_hops;
    }
    route.kind = RouteKind::Multihop;
    route.tree = &*tree;
    route.unreachable =
        cfg.fallback_direct ? UnreachablePolicy::FallbackDirect : UnreachablePolicy::Skip;
  }

  std::vector<std::size_t> wire_sizes = k_alloc;
  if (cfg.charge_index_overhead && cfg.selection_mode == SelectionMode::TopKMagnitude)
    for (auto& k : wire_sizes) k *= 2;  // one extra unit per transmitted index
  result.energy = empirical_energy(dep, clusters, wire_sizes, route,
                                   EnergyModel{cfg.alpha, cfg.multihop_cost});

  if (cfg.alpha == 2) {
    AnalyticReport analytic;
    analytic.intra = cfg.geometry.kind() == AreaGeometry::Kind::Square
                         ? analytic_intra_square(n, cell.n_c, cfg.geometry.side_l())
                         : analytic_intra_disk(n, cell.n_c, cfg.geometry.radius_r0());
    if (cell.route == RouteKind::Direct) {
      const double e_d2 = cfg.geometry.kind() == AreaGeometry::Kind::Square
                              ? analytic_e_d2_square(cfg.geometry.side_l(), *cfg.bs_li)
                              : analytic_e_d2_disk(cfg.geometry.radius_r0());
      analytic.to_bs = static_cast<double>(cell.k_budget) * e_d2;
    } else if (hop_stats) {
      // Chandler mean over the empirical hop CDF, priced at R^2 per hop
      analytic.to_bs = expected_hops_chandler(hop_stats->cdf) * cell.range_r * cell.range_r *
                       static_cast<double>(cell.k_budget);
    }
    analytic.total = analytic.intra + analytic.to_bs;
    result.analytic = analytic;
  }

  if (artifacts != nullptr)
    *artifacts = TrialArtifacts{std::move(dep), std::move(clusters), k_alloc,
                                std::move(payloads), std::move(tree)};
  return result;
}

// Convenience entry point for one-cell configurations: requires every sweep
// axis to be a singleton so the cell is unambiguous.
inline TrialResult run_trial(const ExperimentConfig& cfg, std::size_t trial_index) {
  if (cfg.algorithms.size() != 1 || cfg.n_c_list.size() != 1 || cfg.sigmas.size() != 1 ||
      cfg.k_budgets.size() != 1 || cfg.routes.size() != 1)
    throw InvalidArgumentError("run_trial: config sweep axes must be singletons");
  CellKey cell{cfg.algorithms[0], cfg.n_c_list[0],
               cfg.r_schedule.empty() ? 0.0 : cfg.r_schedule[0], cfg.sigmas[0], cfg.k_budgets[0],
               cfg.routes[0]};
  return run_trial(cfg, cell, trial_index);
}

struct AggregateRow {
  std::string scenario;
  CellKey cell;
  std::size_t trials = 0;
  double mean_intra = 0, sd_intra = 0;
  double mean_tobs = 0, sd_tobs = 0;
  double mean_total = 0, sd_total = 0;
  std::optional<double> mean_hops;
  double mean_error = 0, sd_error = 0;
  double unreachable_rate = 0;
};

struct SweepResult {
  std::vector<CellKey> cells;
  std::vector<TrialResult> trials;  // cell-major, trial-minor
  std::vector<AggregateRow> aggregate;
  std::size_t partial_count = 0;
};

namespace harness_detail {

inline std::pair<double, double> mean_sd(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (const double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace harness_detail

// Cell grid in fixed nesting order: algorithm, (n_c, R), sigma, K, route.
inline std::vector<CellKey> sweep_cells(const ExperimentConfig& cfg) {
  std::vector<CellKey> cells;
  for (const ClusterAlgorithm alg : cfg.algorithms)
    for (std::size_t i = 0; i < cfg.n_c_list.size(); ++i)
      for (const double sigma : cfg.sigmas)
        for (const std::size_t k : cfg.k_budgets)
          for (const RouteKind route : cfg.routes)
            cells.push_back(CellKey{
                alg, cfg.n_c_list[i],
                route == RouteKind::Multihop ? cfg.r_schedule[i] : 0.0, sigma, k, route});
  return cells;
}

// Runs trials in parallel into preassigned slots; aggregation is a serial
// pass over the slot order, so results are identical for any thread count.
inline SweepResult run_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  SweepResult sweep;
  sweep.cells = sweep_cells(cfg);
  const std::size_t n_tasks = sweep.cells.size() * cfg.trials;
  sweep.trials.resize(n_tasks);

  std::size_t n_threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  n_threads = std::min(n_threads, n_tasks);

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= n_tasks) return;
      try {
        sweep.trials[task] =
            run_trial(cfg, sweep.cells[task / cfg.trials], task % cfg.trials);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  for (std::size_t ci = 0; ci < sweep.cells.size(); ++ci) {
    std::vector<double> intra, tobs, total, error, hops, unreach;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialResult& r = sweep.trials[ci * cfg.trials + t];
      intra.push_back(r.energy.intra_cluster);
      tobs.push_back(r.energy.to_bs);
      total.push_back(r.energy.total);
      error.push_back(r.normalized_err);
      if (r.mean_hops) hops.push_back(*r.mean_hops);
      unreach.push_back(static_cast<double>(r.unreachable_count) /
                        static_cast<double>(r.realized_n_c));
      if (r.partial) ++sweep.partial_count;
    }
    AggregateRow row;
    row.scenario = cfg.scenario;
    row.cell = sweep.cells[ci];
    row.trials = cfg.trials;
    std::tie(row.mean_intra, row.sd_intra) = harness_detail::mean_sd(intra);
    std::tie(row.mean_tobs, row.sd_tobs) = harness_detail::mean_sd(tobs);
    std::tie(row.mean_total, row.sd_total) = harness_detail::mean_sd(total);
    std::tie(row.mean_error, row.sd_error) = harness_detail::mean_sd(error);
    if (!hops.empty()) row.mean_hops = harness_detail::mean_sd(hops).first;
    row.unreachable_rate = harness_detail::mean_sd(unreach).first;
    sweep.aggregate.push_back(row);
  }
  return sweep;
}

inline std::string aggregate_csv(const SweepResult& sweep) {
  std::string out =
      "scenario,n_c,sigma,K,route,algorithm,trials,mean_intra,sd_intra,mean_tobs,sd_tobs,"
      "mean_total,sd_total,mean_hops,mean_error,sd_error,unreachable_rate\n";
  for (const AggregateRow& r : sweep.aggregate) {
    out += r.scenario;
    out += ',';
    out += std::to_string(r.cell.n_c);
    out += ',';
    out += csv::format_double(r.cell.sigma);
    out += ',';
    out += std::to_string(r.cell.k_budget);
    out += ',';
    out += to_string(r.cell.route);
    out += ',';
    out += to_string(r.cell.algorithm);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += csv::format_double(r.mean_intra);
    out += ',';
    out += csv::format_double(r.sd_intra);
    out += ',';
    out += csv::format_double(r.mean_tobs);
    out += ',';
    out += csv::format_double(r.sd_tobs);
    out += ',';
    out += csv::format_double(r.mean_total);
    out += ',';
    out += csv::format_double(r.sd_total);
    out += ',';
    if (r.mean_hops) out += csv::format_double(*r.mean_hops);
    out += ',';
    out += csv::format_double(r.mean_error);
    out += ',';
    out += csv::format_double(r.sd_error);
    out += ',';
    out += csv::format_double(r.unreachable_rate);
    out += '\n';
  }
  return out;
}

inline std::string trials_csv(const SweepResult& sweep, const ExperimentConfig& cfg) {
  std::string out =
      "trial,n_clusters,algorithm,route,intra,to_bs,total,scenario,n_c,sigma,K,range_r,"
      "mean_hops,error,analytic_intra,analytic_to_bs,analytic_total,unreachable,partial,seed\n";
  for (const TrialResult& r : sweep.trials) {
    out += std::to_string(r.trial_index);
    out += ',';
    out += std::to_string(r.realized_n_c);
    out += ',';
    out += to_string(r.cell.algorithm);
    out += ',';
    out += to_string(r.cell.route);
    out += ',';
    out += csv::format_double(r.energy.intra_cluster);
    out += ',';
    out += csv::format_double(r.energy.to_bs);
    out += ',';
    out += csv::format_double(r.energy.total);
    out += ',';
    out += cfg.scenario;
    out += ',';
    out += std::to_string(r.cell.n_c);
    out += ',';
    out += csv::format_double(r.cell.sigma);
    out += ',';
    out += std::to_string(r.cell.k_budget);
    out += ',';
    if (r.cell.route == RouteKind::Multihop) out += csv::format_double(r.cell.range_r);
    out += ',';
    if (r.mean_hops) out += csv::format_double(*r.mean_hops);
    out += ',';
    out += csv::format_double(r.normalized_err);
    out += ',';
    if (r.analytic) {
      out += csv::format_double(r.analytic->intra);
      out += ',';
      out += csv::format_double(r.analytic->to_bs);
      out += ',';
      out += csv::format_double(r.analytic->total);
    } else {
      out += ",,";
    }
    out += ',';
    out += std::to_string(r.unreachable_count);
    out += ',';
    out += r.partial ? '1' : '0';
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

// Writes trials.csv, aggregate.csv and manifest.txt. Output bytes are a pure
// function of (config, master seed).
inline void write_results(const SweepResult& sweep, const ExperimentConfig& cfg,
                          const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string());
  csv::write_file(out_dir / "trials.csv", trials_csv(sweep, cfg));
  csv::write_file(out_dir / "aggregate.csv", aggregate_csv(sweep));
  csv::write_file(out_dir / "manifest.txt", to_manifest(cfg).serialize());
}

}  // namespace wsndct
