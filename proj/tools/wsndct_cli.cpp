// wsndct command-line front door: run sweeps, evaluate the closed-form energy
// expressions, and dump single pipeline stages as CSV.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error,
// 4 partial connectivity under --strict.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wsndct/wsndct.hpp"

namespace {

using namespace wsndct;

ExperimentConfig resolve_config(const std::string& scenario_or_path) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), scenario_or_path) != names.end())
    return preset(scenario_or_path);
  if (std::filesystem::exists(scenario_or_path)) {
    std::ifstream in(scenario_or_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_manifest(Manifest::parse(buf.str()));
  }
  std::string listed;
  for (const auto& n : names) {
    if (!listed.empty()) listed += ", ";
    listed += n;
  }
  throw ConfigError("unknown scenario or config file `" + scenario_or_path +
                    "`; available scenarios: " + listed);
}

std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag,
                                      const ExperimentConfig& cfg) {
  if (flag) return *flag;
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  const char* env = std::getenv("WSNDCT_OUT_DIR");
  const std::filesystem::path base = env != nullptr ? env : "results";
  return base / cfg.scenario;
}

struct RunArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> threads;
  std::optional<std::string> out;
  bool strict = false;
};

int cmd_run(const RunArgs& args) {
  ExperimentConfig cfg = resolve_config(args.scenario);
  if (args.seed) cfg.master_seed = *args.seed;
  if (args.trials) cfg.trials = *args.trials;
  if (args.threads) cfg.threads = *args.threads;
  if (args.strict) cfg.strict = true;
  validate(cfg);

  const SweepResult sweep = run_sweep(cfg);
  const std::filesystem::path out_dir = resolve_out_dir(args.out, cfg);
  write_results(sweep, cfg, out_dir);

  std::cerr << "wsndct: " << cfg.scenario << ": " << sweep.cells.size() << " cells x "
            << cfg.trials << " trials -> " << (out_dir / "aggregate.csv").string() << "\n";
  if (sweep.partial_count > 0)
    std::cerr << "wsndct: " << sweep.partial_count
              << " trial(s) partially connected (unreachable cluster heads, no fallback)\n";
  return cfg.strict && sweep.partial_count > 0 ? 4 : 0;
}

struct AnalyticArgs {
  std::string formula;
  std::optional<std::size_t> n, nc, k;
  std::optional<double> side_l, bs_li, radius_r0, range_r, intra, hops;
  std::optional<std::string> cdf;
  std::optional<std::size_t> max_hops;
  int alpha = 2;
};

int cmd_analytic(const AnalyticArgs& a) {
  const auto need = [&](const auto& opt, const char* flag) -> const auto& {
    if (!opt)
      throw ConfigError("analytic: --" + std::string(flag) + " is required for formula `" +
                        a.formula + "`");
    return *opt;
  };
  std::string header = "formula";
  std::string row = a.formula;
  const auto field = [&](const char* name, const std::string& value) {
    header += ',';
    header += name;
    row += ',';
    row += value;
  };

  double value = 0.0;
  if (a.formula == "intra_square") {
    value = analytic_intra_square(need(a.n, "n"), need(a.nc, "nc"), need(a.side_l, "L"), a.alpha);
    field("n", std::to_string(*a.n));
    field("n_c", std::to_string(*a.nc));
    field("L", csv::format_double(*a.side_l));
  } else if (a.formula == "intra_disk") {
    value = analytic_intra_disk(need(a.n, "n"), need(a.nc, "nc"), need(a.radius_r0, "R0"), a.alpha);
    field("n", std::to_string(*a.n));
    field("n_c", std::to_string(*a.nc));
    field("R0", csv::format_double(*a.radius_r0));
  } else if (a.formula == "e_d2_square") {
    value = analytic_e_d2_square(need(a.side_l, "L"), need(a.bs_li, "Li"));
    field("L", csv::format_double(*a.side_l));
    field("Li", csv::format_double(*a.bs_li));
  } else if (a.formula == "e_d2_disk") {
    value = analytic_e_d2_disk(need(a.radius_r0, "R0"));
    field("R0", csv::format_double(*a.radius_r0));
  } else if (a.formula == "total_direct_square") {
    value = analytic_total_direct_square(need(a.n, "n"), need(a.nc, "nc"), need(a.side_l, "L"),
                                         need(a.bs_li, "Li"), need(a.k, "K"), a.alpha);
    field("n", std::to_string(*a.n));
    field("n_c", std::to_string(*a.nc));
    field("L", csv::format_double(*a.side_l));
    field("Li", csv::format_double(*a.bs_li));
    field("K", std::to_string(*a.k));
  } else if (a.formula == "total_direct_disk") {
    value = analytic_total_direct_disk(need(a.n, "n"), need(a.nc, "nc"),
                                       need(a.radius_r0, "R0"), need(a.k, "K"), a.alpha);
    field("n", std::to_string(*a.n));
    field("n_c", std::to_string(*a.nc));
    field("R0", csv::format_double(*a.radius_r0));
    field("K", std::to_string(*a.k));
  } else if (a.formula == "total_multihop") {
    value = analytic_total_multihop(need(a.intra, "intra"), need(a.hops, "hops"),
                                    need(a.range_r, "R"), need(a.k, "K"));
    field("intra", csv::format_double(*a.intra));
    field("hops", csv::format_double(*a.hops));
    field("R", csv::format_double(*a.range_r));
    field("K", std::to_string(*a.k));
  } else if (a.formula == "chandler") {
    HopCdf cdf;
    std::string echoed;
    std::stringstream ss(need(a.cdf, "cdf"));
    std::string item;
    while (std::getline(ss, item, ',')) {
      double v = 0.0;
      try {
        v = std::stod(item);
      } catch (const std::exception&) {
        throw ConfigError("analytic: bad --cdf entry `" + item + "`");
      }
      cdf.p.push_back(v);
      if (!echoed.empty()) echoed += ';';
      echoed += csv::format_double(v);
    }
    value = a.max_hops ? expected_hops_chandler(cdf, *a.max_hops) : expected_hops_chandler(cdf);
    field("cdf", echoed);
    if (a.max_hops) field("max_hops", std::to_string(*a.max_hops));
  } else {
    throw ConfigError(
        "analytic: unknown formula `" + a.formula +
        "`; available: intra_square, intra_disk, e_d2_square, e_d2_disk, "
        "total_direct_square, total_direct_disk, total_multihop, chandler");
  }

  std::cout << header << ",value\n" << row << ',' << csv::format_double(value) << "\n";
  return 0;
}

struct InspectArgs {
  std::string stage;
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::size_t trial = 0;
};

int cmd_inspect(const InspectArgs& args) {
  if (args.stage != "deploy" && args.stage != "cluster" && args.stage != "compress" &&
      args.stage != "route")
    throw ConfigError("inspect: unknown stage `" + args.stage +
                      "`; available: deploy, cluster, compress, route");
  ExperimentConfig cfg = resolve_config(args.scenario);
  if (args.seed) cfg.master_seed = *args.seed;
  validate(cfg);

  CellKey cell;
  cell.algorithm = cfg.algorithms.front();
  cell.n_c = cfg.n_c_list.front();
  cell.sigma = cfg.sigmas.front();
  cell.k_budget = cfg.k_budgets.front();
  cell.route = cfg.routes.front();
  if (args.stage == "route") {
    if (std::find(cfg.routes.begin(), cfg.routes.end(), RouteKind::Multihop) == cfg.routes.end())
      throw ConfigError("inspect route: scenario has no multihop route");
    cell.route = RouteKind::Multihop;
  }
  if (cell.route == RouteKind::Multihop) cell.range_r = cfg.r_schedule.front();

  TrialArtifacts artifacts;
  run_trial(cfg, cell, args.trial, &artifacts);

  const std::filesystem::path out_dir = resolve_out_dir(args.out, cfg);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string());

  std::vector<std::filesystem::path> written;
  if (args.stage == "deploy") {
    csv::write_file(out_dir / "nodes.csv", csv::deployment_csv(artifacts.deployment));
    written.push_back(out_dir / "nodes.csv");
  } else if (args.stage == "cluster") {
    csv::write_file(out_dir / "clusters.csv", csv::cluster_csv(artifacts.clusters));
    written.push_back(out_dir / "clusters.csv");
  } else if (args.stage == "compress") {
    csv::write_file(out_dir / "payload.csv", csv::payload_csv(artifacts.payloads));
    csv::write_file(out_dir / "permutation.csv", csv::permutation_csv(artifacts.payloads));
    written.push_back(out_dir / "payload.csv");
    written.push_back(out_dir / "permutation.csv");
  } else {
    csv::write_file(out_dir / "tree.csv", csv::tree_csv(*artifacts.tree));
    written.push_back(out_dir / "tree.csv");
  }
  Manifest manifest = to_manifest(cfg);
  manifest.set("export", "stage", args.stage);
  manifest.set("export", "trial", std::to_string(args.trial));
  manifest.set("export", "deployment_seed", std::to_string(artifacts.deployment.seed));
  manifest.set("export", "bs_x", csv::format_double(artifacts.deployment.bs.x));
  manifest.set("export", "bs_y", csv::format_double(artifacts.deployment.bs.y));
  csv::write_file(out_dir / "manifest.txt", manifest.serialize());

  for (const auto& p : written) std::cerr << "wsndct: wrote " << p.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clustered WSN data collection with distributed DCT compression"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run a scenario or config-file sweep");
  run->add_option("scenario", run_args.scenario, "preset name or config file path")->required();
  run->add_option("--seed", run_args.seed, "master seed override");
  run->add_option("--trials", run_args.trials, "trials per cell override");
  run->add_option("--threads", run_args.threads, "worker thread cap (0 = all cores)");
  run->add_option("--out", run_args.out, "output directory");
  run->add_flag("--strict", run_args.strict, "exit 4 when any trial is partially connected");

  AnalyticArgs an_args;
  CLI::App* an = app.add_subcommand("analytic", "evaluate a closed-form energy expression");
  an->add_option("--formula", an_args.formula, "formula name")->required();
  an->add_option("-n,--n", an_args.n, "sensor count N");
  an->add_option("--nc", an_args.nc, "cluster count N_c");
  an->add_option("-L,--L", an_args.side_l, "square side L");
  an->add_option("--Li", an_args.bs_li, "BS abscissa L_i");
  an->add_option("--R0", an_args.radius_r0, "disk radius R0");
  an->add_option("-K,--K", an_args.k, "total kept coefficients K");
  an->add_option("-R,--R", an_args.range_r, "CH transmission range R");
  an->add_option("--intra", an_args.intra, "intra-cluster cost term");
  an->add_option("--hops", an_args.hops, "expected hop count");
  an->add_option("--cdf", an_args.cdf, "hop CDF, comma separated");
  an->add_option("--max-hops", an_args.max_hops, "hop cap for chandler");
  an->add_option("--alpha", an_args.alpha, "path loss exponent (closed forms need 2)");

  InspectArgs in_args;
  CLI::App* insp = app.add_subcommand("inspect", "emit one pipeline stage as CSV");
  insp->add_option("stage", in_args.stage, "deploy | cluster | compress | route")->required();
  insp->add_option("scenario", in_args.scenario, "preset name or config file path")->required();
  insp->add_option("--seed", in_args.seed, "master seed override");
  insp->add_option("--trial", in_args.trial, "trial index (default 0)");
  insp->add_option("--out", in_args.out, "output directory");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(run_args);
    if (an->parsed()) return cmd_analytic(an_args);
    if (insp->parsed()) return cmd_inspect(in_args);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const wsndct::ConfigError& e) {
    std::cerr << "wsndct: config error: " << e.what() << "\n";
    return 2;
  } catch (const wsndct::UnsupportedModelError& e) {
    std::cerr << "wsndct: unsupported model: " << e.what() << "\n";
    return 2;
  } catch (const wsndct::Error& e) {
    std::cerr << "wsndct: error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "wsndct: error: " << e.what() << "\n";
    return 3;
  }
}
