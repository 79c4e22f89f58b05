// Spawns the real binary to pin the command-line contract: exit codes,
// machine-parseable analytic output, and the inspect stage schemas.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string cli_path() {
  const char* env = std::getenv("WSNDCT_CLI");
  if (env != nullptr) return env;
#ifdef WSNDCT_CLI_PATH
  return WSNDCT_CLI_PATH;
#else
  return "wsndct";
#endif
}

struct CmdResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult result;
  char buf[512];
  while (fgets(buf, sizeof(buf), pipe) != nullptr) result.output += buf;
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

// value column of the single data row printed by `analytic`
double analytic_value(const std::string& args) {
  const auto r = run_cli("analytic " + args);
  REQUIRE(r.exit_code == 0);
  std::istringstream lines(r.output);
  std::string header, row;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, row));
  const auto comma = row.rfind(',');
  REQUIRE(comma != std::string::npos);
  return std::stod(row.substr(comma + 1));
}

std::filesystem::path fresh_dir() {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path() /
             ("wsndct_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  return dir;
}

std::size_t data_rows(const std::filesystem::path& file) {
  std::ifstream in(file);
  REQUIRE(in.good());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  return rows - 1;  // drop the header
}

}  // namespace

TEST_CASE("analytic prints CSV values matching the closed forms") {
  REQUIRE(analytic_value("--formula e_d2_square -L 100 --Li 50") ==
          Catch::Approx(1666.6667).epsilon(1e-6));
  REQUIRE(analytic_value("--formula intra_square -n 2000 --nc 2000 -L 100") == 0.0);
  REQUIRE(analytic_value("--formula chandler --cdf 0.2,0.7,1.0") == Catch::Approx(2.1));
  REQUIRE(analytic_value("--formula total_direct_disk -n 2000 --nc 100 --R0 50 -K 200") ==
          Catch::Approx(273750.0));
  REQUIRE(analytic_value("--formula total_multihop --intra 23750 --hops 2.5 -R 18 -K 200") ==
          Catch::Approx(185750.0));
}

TEST_CASE("config mistakes exit with code 2") {
  const auto unknown = run_cli("run nosuch");
  REQUIRE(unknown.exit_code == 2);
  REQUIRE(unknown.output.find("fig7") != std::string::npos);  // lists available names

  REQUIRE(run_cli("analytic --formula intra_square -n 2000 --nc 100 -L 100 --alpha 4")
              .exit_code == 2);
  REQUIRE(run_cli("analytic --formula nosuch").exit_code == 2);
  REQUIRE(run_cli("analytic --formula e_d2_square -L 100").exit_code == 2);  // missing --Li
  REQUIRE(run_cli("inspect bogus smoke").exit_code == 2);
}

TEST_CASE("inspect emits the stage schemas") {
  const auto dir = fresh_dir();
  REQUIRE(run_cli("inspect deploy smoke --out " + dir.string()).exit_code == 0);
  REQUIRE(data_rows(dir / "nodes.csv") == 200);  // smoke deploys 200 nodes
  {
    std::ifstream in(dir / "nodes.csv");
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "node_id,x,y");
  }

  const auto cdir = fresh_dir();
  REQUIRE(run_cli("inspect compress smoke --out " + cdir.string()).exit_code == 0);
  REQUIRE(data_rows(cdir / "payload.csv") == 20);      // rows sum to the K budget
  REQUIRE(data_rows(cdir / "permutation.csv") == 200);  // every node appears once

  const auto kdir = fresh_dir();
  REQUIRE(run_cli("inspect cluster smoke --out " + kdir.string()).exit_code == 0);
  REQUIRE(data_rows(kdir / "clusters.csv") == 200);

  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(cdir);
  std::filesystem::remove_all(kdir);
}

TEST_CASE("strict runs flag partial connectivity with exit 4") {
  // a multihop scenario whose range cannot reach the BS from anywhere
  const auto dir = fresh_dir();
  std::filesystem::create_directories(dir);
  const auto config_path = dir / "starved.cfg";
  {
    std::ofstream out(config_path);
    out << "[run]\nscenario = starved\n\n"
        << "[deployment]\ngeometry = disk\nradius_r0 = 50\nn_nodes = 120\n\n"
        << "[clustering]\nalgorithms = leach\nn_c = 8\n\n"
        << "[compression]\nk_budget = 16\nsort_mode = descending\n"
        << "selection_mode = top_k_magnitude\n\n"
        << "[route]\nmodes = multihop\nr_schedule = 0.5\n\n"
        << "[energy]\nalpha = 2\n\n"
        << "[field]\nkind = gaussian_bumps\n\n"
        << "[noise]\nsigma = 0\n\n"
        << "[sweep]\ntrials = 2\nmaster_seed = 5\n";
  }
  const auto strict = run_cli("run " + config_path.string() + " --strict --out " +
                              (dir / "out").string());
  REQUIRE(strict.exit_code == 4);
  const auto lax =
      run_cli("run " + config_path.string() + " --out " + (dir / "out2").string());
  REQUIRE(lax.exit_code == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("run writes the result set and echoes the effective config") {
  const auto dir = fresh_dir();
  const auto r = run_cli("run smoke --seed 7 --out " + dir.string());
  REQUIRE(r.exit_code == 0);
  REQUIRE(std::filesystem::exists(dir / "trials.csv"));
  REQUIRE(std::filesystem::exists(dir / "aggregate.csv"));
  REQUIRE(std::filesystem::exists(dir / "manifest.txt"));
  {
    std::ifstream in(dir / "manifest.txt");
    std::stringstream buf;
    buf << in.rdbuf();
    REQUIRE(buf.str().find("master_seed = 7") != std::string::npos);  // override echoed
  }
  REQUIRE(data_rows(dir / "aggregate.csv") == 1);
  REQUIRE(data_rows(dir / "trials.csv") == 2);
  std::filesystem::remove_all(dir);
}
