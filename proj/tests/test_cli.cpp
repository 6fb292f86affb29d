#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "cli.hpp"
#include "stochwave/dyadic.hpp"
#include "stochwave/errors.hpp"

using namespace stochwave;
using namespace stochwave::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// run the installed binary, capture exit code
int run_binary(const std::string& args) {
  std::string cmd = std::string(STOCHWAVE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("parse_args accepts the documented convergence invocation", "[cli]") {
  RunConfig cfg = parse_args(
      {"convergence", "--preset", "sin-sigma", "--alpha-hat", "1", "--beta", "0",
       "--k-list", "2^-3,2^-4,2^-5,2^-6", "--h", "2^-6", "--k-ref", "2^-9",
       "--mc", "500", "--seed", "42", "--out", "rates.csv"});
  CHECK(cfg.subcommand == Subcommand::kConvergence);
  CHECK(cfg.preset == "sin-sigma");
  CHECK(cfg.alpha_hat == 1);
  CHECK(cfg.beta == 0.0);
  REQUIRE(cfg.k_list.size() == 4);
  CHECK(cfg.k_list[0] == dyadic_value(3));
  CHECK(cfg.k_list[3] == dyadic_value(6));
  CHECK(cfg.n_cells == 64);
  CHECK(cfg.k_ref == dyadic_value(9));
  CHECK(cfg.mc == 500);
  CHECK(cfg.seed == 42);
  CHECK(cfg.out == "rates.csv");
  CHECK(cfg.error_time == experiments::ErrorTime::kFinal);
}

TEST_CASE("parse_args rejects malformed input", "[cli]") {
  CHECK_THROWS_AS(parse_args({"convergence", "--beta", "0.75"}), ConfigError);
  CHECK_THROWS_AS(parse_args({"convergence", "--k-list", "0.1"}), ConfigError);
  CHECK_THROWS_AS(parse_args({"convergence", "--alpha-hat", "2"}), ConfigError);
  CHECK_THROWS_AS(parse_args({"convergence", "--h", "0.015625"}), ConfigError);
  CHECK_THROWS_AS(parse_args({"convergence", "--no-such-flag", "1"}), ConfigError);
  CHECK_THROWS_AS(parse_args({"frobnicate"}), ConfigError);
  CHECK_THROWS_AS(parse_args({}), ConfigError);
  CHECK_THROWS_AS(parse_args({"energy", "--error-time", "sometimes"}), ConfigError);
}

TEST_CASE("config file round trip and flag precedence", "[cli]") {
  RunConfig cfg = parse_args(
      {"convergence", "--preset", "sigma-v", "--alpha-hat", "0", "--beta", "0.25",
       "--k-list", "2^-3,2^-4,2^-5", "--h", "2^-5", "--k-ref", "2^-8", "--mc",
       "37", "--seed", "7", "--out", "x.csv", "--error-time", "max"});

  namespace fs = std::filesystem;
  fs::path file = fs::temp_directory_path() / "stochwave_cli_roundtrip.cfg";
  {
    std::ofstream out(file);
    out << serialize_config(cfg);
  }
  RunConfig reparsed = parse_args({"--config", file.string()});
  CHECK(reparsed == cfg);

  // explicit flags override config-file values
  RunConfig overridden = parse_args({"convergence", "--config", file.string(),
                                     "--mc", "99"});
  CHECK(overridden.mc == 99);
  CHECK(overridden.preset == "sigma-v");
  fs::remove(file);

  RunConfig sweep = parse_args({"beta-sweep", "--preset", "sigma-5v", "--k",
                                "2^-6", "--h", "2^-5", "--beta-list",
                                "0,0.25,0.49", "--mc-list", "25,50,100", "--T",
                                "0.5", "--seed", "3"});
  fs::path file2 = fs::temp_directory_path() / "stochwave_cli_roundtrip2.cfg";
  {
    std::ofstream out(file2);
    out << serialize_config(sweep);
  }
  CHECK(parse_args({"--config", file2.string()}) == sweep);
  fs::remove(file2);
}

TEST_CASE("single-path invocations are byte-identical per seed", "[cli]") {
  namespace fs = std::filesystem;
  fs::path out = fs::temp_directory_path() / "stochwave_cli_path.csv";
  std::string args = "single-path --modes 2 --fine-level 6 --seed 11 --out " +
                     out.string();
  REQUIRE(run_binary(args) == 0);
  std::string first = slurp(out);
  REQUIRE(run_binary(args) == 0);
  CHECK(slurp(out) == first);
  CHECK(first.rfind("t,beta_1,beta_2\n", 0) == 0);
  fs::remove(out);
}

TEST_CASE("exit codes: usage 2, numerical 3, io 4", "[cli]") {
  CHECK(run_binary("convergence --beta 0.9") == 2);
  CHECK(run_binary("nonsense") == 2);
  CHECK(run_binary("single-path --fine-level 5 --seed 1 --out "
                   "/nonexistent_dir/x.csv") == 4);
  // sigma = 5v at k = 1/2 over a long horizon exceeds the blow-up budget
  CHECK(run_binary("energy --preset sigma-5v --beta 0 --k 2^-1 --h 2^-2 "
                   "--mc 12 --seed 5 --T 64 --out /tmp/stochwave_cli_blow.csv") ==
        3);
}

TEST_CASE("energy subcommand writes the documented CSV and summary", "[cli]") {
  namespace fs = std::filesystem;
  fs::path out = fs::temp_directory_path() / "stochwave_cli_energy.csv";
  fs::path log = fs::temp_directory_path() / "stochwave_cli_energy.log";
  std::string cmd = std::string(STOCHWAVE_CLI_PATH) +
                    " energy --preset zero-noise --beta 0 --k 2^-6 --h 2^-4 "
                    "--mc 1 --seed 1 --out " +
                    out.string() + " > " + log.string();
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::string summary = slurp(log);
  CHECK(summary.find("energy_drift=") != std::string::npos);
  // conservation run: drift below 1e-10
  auto pos = summary.find("energy_drift=");
  double drift = std::stod(summary.substr(pos + 13));
  CHECK(drift < 1e-10);
  std::string csv = slurp(out);
  CHECK(csv.rfind("t,e_kin_mean,", 0) == 0);
  fs::remove(out);
  fs::remove(log);
}
