#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>
#ifndef _WIN32
#include <sys/wait.h>
#endif

#include "json.hpp"

#include "patmsts/closed_form.hpp"
#include "patmsts/phase_space.hpp"

using namespace patmsts;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Runs the installed binary with stdout captured; stderr is left alone so
// failures show up in the test log.
RunResult run_cli(const std::string& args) {
  static int serial = 0;
  const std::string path = "cli_capture_" + std::to_string(serial++) + ".tmp";
  const std::string cmd =
      std::string(PATMSTS_CLI_PATH) + " " + args + " > " + path;
  const int raw = std::system(cmd.c_str());
  RunResult r;
#ifdef _WIN32
  r.exit_code = raw;
#else
  r.exit_code = (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
#endif
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  std::remove(path.c_str());
  return r;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

TEST_CASE("help and argument errors") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("table --help").exit_code == 0);
  CHECK(run_cli("").exit_code == 1);              // subcommand required
  CHECK(run_cli("frobnicate").exit_code == 1);    // unknown subcommand
  CHECK(run_cli("table --quantity nonsense 2>/dev/null").exit_code == 1);
  CHECK(run_cli("wigner --grid 1 2>/dev/null").exit_code == 1);
  CHECK(run_cli("wigner --box -2 2>/dev/null").exit_code == 1);
  CHECK(run_cli("table --r-step 0 2>/dev/null").exit_code == 1);
  // Domain validation happens past flag parsing.
  CHECK(run_cli("table --m 99 2>/dev/null").exit_code == 1);
}

TEST_CASE("table emits one row per grid point") {
  const RunResult r = run_cli(
      "table --m 0 --n 1 --nbar 0.3 --r-min 0.2 --r-max 0.6 --r-step 0.2 "
      "--quantity g");
  REQUIRE(r.exit_code == 0);
  const auto ls = lines_of(r.out);
  REQUIRE(ls.size() == 4);  // header + three r values
  CHECK(ls[0] == "m,n,r,nbar,quantity,value");

  const auto row = split_csv(ls[1]);
  REQUIRE(row.size() == 6);
  CHECK(row[0] == "0");
  CHECK(row[1] == "1");
  CHECK(row[4] == "g");
  const DerivedParams d = derive(StateParams{0, 1, 0.2, 0.3});
  CHECK(std::stod(row[5]) ==
        doctest::Approx(*cross_correlation_g(0, 1, d)).epsilon(1e-14));
}

TEST_CASE("table json format carries the same numbers") {
  const RunResult r = run_cli(
      "table --m 1 --n 1 --nbar 0.5 --r-min 0.6 --r-max 0.6 --r-step 0.1 "
      "--quantity witness --format json");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  const DerivedParams d = derive(StateParams{1, 1, 0.6, 0.5});
  CHECK(j[0]["value"].get<double>() ==
        doctest::Approx(sv_witness(1, 1, d)).epsilon(1e-14));
  CHECK(j[0]["quantity"] == "witness");
}

TEST_CASE("config file supplies the grid, flags win on conflict") {
  const std::string cfg_path = "cli_table_cfg.json";
  {
    std::ofstream f(cfg_path);
    f << R"({"pairs": [[0, 1], [1, 1]], "nbars": [0.2],
             "r_min": 0.5, "r_max": 0.5, "r_step": 0.5,
             "quantity": "norm"})";
  }
  const RunResult r = run_cli("table --config " + cfg_path);
  REQUIRE(r.exit_code == 0);
  auto ls = lines_of(r.out);
  REQUIRE(ls.size() == 3);  // header + two pairs
  CHECK(split_csv(ls[1])[4] == "norm");

  // Explicit flag overrides the config quantity.
  const RunResult r2 =
      run_cli("table --config " + cfg_path + " --quantity mean_a");
  REQUIRE(r2.exit_code == 0);
  CHECK(split_csv(lines_of(r2.out)[1])[4] == "mean_a");

  std::remove(cfg_path.c_str());

  // Missing and malformed config files are distinct failures.
  CHECK(run_cli("table --config does_not_exist.json 2>/dev/null")
            .exit_code == 3);
  {
    std::ofstream f(cfg_path);
    f << "{ not json";
  }
  CHECK(run_cli("table --config " + cfg_path + " 2>/dev/null").exit_code ==
        1);
  std::remove(cfg_path.c_str());
}

TEST_CASE("wigner grid output") {
  const RunResult r = run_cli(
      "wigner --m 0 --n 1 --r 0.3 --nbar 0.2 --grid 5 --box 1.5 "
      "--axis sum");
  REQUIRE(r.exit_code == 0);
  const auto ls = lines_of(r.out);
  REQUIRE(ls.size() == 26);  // header + 5 x 5
  CHECK(ls[0] == "axis_kind,q,p,w");
  const auto row = split_csv(ls[1]);
  REQUIRE(row.size() == 4);
  CHECK(row[0] == "sum");
  CHECK(std::stod(row[1]) == doctest::Approx(-1.5));

  // Center row of the sum cut at the origin is the origin value.
  const auto mid = split_csv(ls[1 + 2 * 5 + 2]);
  const DerivedParams d = derive(StateParams{0, 1, 0.3, 0.2});
  CHECK(std::stod(mid[3]) ==
        doctest::Approx(wigner(0, 1, d, cplx(0.0), cplx(0.0)))
            .epsilon(1e-13));
}

TEST_CASE("threshold scan matches the library values") {
  const RunResult r = run_cli("thresholds --m 0 --n 1 --nbar 1.0");
  REQUIRE(r.exit_code == 0);
  const auto ls = lines_of(r.out);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "m,n,nbar,r_a,r_c");
  const auto row = split_csv(ls[1]);
  REQUIRE(row.size() == 5);
  CHECK(std::stod(row[3]) ==
        doctest::Approx(*sv_threshold(0, 1, 1.0)).epsilon(1e-10));
  CHECK(std::stod(row[4]) ==
        doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-10));
}

TEST_CASE("file output and io failure") {
  const std::string out_path = "cli_out_test.csv";
  const RunResult r = run_cli(
      "table --m 0 --n 0 --nbar 0 --r-min 0.1 --r-max 0.1 --r-step 0.1 "
      "--quantity norm --out " +
      out_path);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  std::ifstream f(out_path);
  REQUIRE(f.good());
  std::string header;
  std::getline(f, header);
  CHECK(header == "m,n,r,nbar,quantity,value");
  f.close();
  std::remove(out_path.c_str());

  CHECK(run_cli("table --out /nonexistent_dir/x.csv 2>/dev/null")
            .exit_code == 3);
}

TEST_CASE("verify smoke profile over the wire") {
  const RunResult r = run_cli("verify --profile smoke --format json");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["profile"] == "smoke");
  CHECK(j["all_pass"].get<bool>());
  CHECK(j["checks"].size() >= 30);
  CHECK(!j["discrepancies"].empty());
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c.contains("deviation"));
    CHECK(c.contains("tolerance"));
    CHECK(c.contains("pass"));
  }
}
