#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "assn/config.hpp"
#include "assn/runner.hpp"

using namespace assn;

namespace {

std::string write_file(const char* name, const std::string& content) {
  const std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("headline defaults per problem and solver") {
  SUBCASE("explicit line source") {
    const SolverConfig cfg =
        parse_config({{"problem", "linesource"}, {"solver", "explicit"}}, {});
    CHECK(cfg.cfl == 0.95);
    CHECK(cfg.quad_order == 4);
    CHECK(cfg.nx == 200);
    CHECK(cfg.ny == 200);
    CHECK(cfg.t_end == 1.0);
    CHECK(cfg.sigma_as == 5.0);
    CHECK(cfg.beta == 4.5);
    CHECK(cfg.eps_tol == 1e-4);
    CHECK(cfg.gmres_tol == 1.5e-8);
  }
  SUBCASE("implicit line source") {
    const SolverConfig cfg =
        parse_config({{"problem", "linesource"}, {"solver", "implicit"}}, {});
    CHECK(cfg.cfl == 2.0);
    CHECK(cfg.sigma_as == 7.0);
    CHECK(cfg.beta == 4.0);
  }
  SUBCASE("lattice") {
    const SolverConfig cfg = parse_config({{"problem", "lattice"}, {"solver", "explicit"}}, {});
    CHECK(cfg.nx == 280);
    CHECK(cfg.ny == 280);
    CHECK(cfg.t_end == 3.2);
  }
}

TEST_CASE("config file parsing") {
  const std::string path = write_file("assn_cfg_ok.cfg",
                                      "# comment line\n"
                                      "problem = linesource\n"
                                      "solver = explicit   # trailing comment\n"
                                      "nx = 40\n"
                                      "ny = 40\n"
                                      "sigma_as = 2.5\n");
  const ConfigMap file_values = read_config_file(path);
  const SolverConfig cfg = parse_config(file_values, {});
  CHECK(cfg.nx == 40);
  CHECK(cfg.sigma_as == 2.5);
  std::filesystem::remove(path);
}

TEST_CASE("flags take precedence over file values") {
  const SolverConfig cfg = parse_config(
      {{"problem", "linesource"}, {"solver", "explicit"}, {"sigma_as", "5"}},
      {{"sigma_as", "0"}});
  CHECK(cfg.sigma_as == 0.0);
}

TEST_CASE("validation errors") {
  const ConfigMap base{{"problem", "linesource"}, {"solver", "explicit"}};
  CHECK_THROWS_AS(parse_config({}, {}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"problem", "linesource"}}, {}), ConfigError);

  SUBCASE("negative cfl") {
    ConfigMap m = base;
    m["cfl"] = "-1";
    CHECK_THROWS_AS(parse_config(m, {}), ConfigError);
  }
  SUBCASE("unknown key is named") {
    ConfigMap m = base;
    m["sigma_typo"] = "1";
    try {
      parse_config(m, {});
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("sigma_typo") != std::string::npos);
    }
  }
  SUBCASE("type mismatch") {
    ConfigMap m = base;
    m["nx"] = "forty";
    CHECK_THROWS_AS(parse_config(m, {}), ConfigError);
    m["nx"] = "40.5";
    CHECK_THROWS_AS(parse_config(m, {}), ConfigError);
  }
  SUBCASE("bad enum value") {
    ConfigMap m = base;
    m["solver"] = "semi";
    CHECK_THROWS_AS(parse_config(m, {}), ConfigError);
  }
}

TEST_CASE("config hash distinguishes runs") {
  const SolverConfig a = parse_config({{"problem", "linesource"}, {"solver", "explicit"}}, {});
  SolverConfig b = a;
  b.sigma_as = 0.0;
  CHECK(a.hash() != b.hash());
  CHECK(a.hash() == a.hash());
  CHECK(a.hash_comment_line().rfind("# config_hash=", 0) == 0);
}

TEST_CASE("run writes hashed outputs and is deterministic") {
  const std::string prefix =
      (std::filesystem::temp_directory_path() / "assn_run_test").string();
  ConfigMap m{{"problem", "linesource"}, {"solver", "explicit"}, {"nx", "20"}, {"ny", "20"},
              {"quad_order", "2"},       {"t_end", "0.2"},       {"out", prefix}};
  const SolverConfig cfg = parse_config(m, {});
  const RunOutputs out = run(cfg);
  CHECK(out.steps > 0);
  CHECK(out.max_phi > 0.0);

  auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  const std::string phi1 = slurp(prefix + "_phi.csv");
  CHECK(phi1.rfind("# config_hash=", 0) == 0);
  CHECK(phi1.find("x,y,phi") != std::string::npos);

  // a second identical run reproduces the CSV bit for bit
  run(cfg);
  CHECK(slurp(prefix + "_phi.csv") == phi1);

  // sigma_as = 0 differs from the default sigma_as = 5
  ConfigMap m0 = m;
  m0["sigma_as"] = "0";
  const SolverConfig cfg0 = parse_config(m0, {});
  run(cfg0);
  CHECK(slurp(prefix + "_phi.csv") != phi1);

  for (const char* suffix :
       {"_phi.csv", "_cuts.csv", "_rings.csv", "_ring_stats.csv", "_summary.txt"})
    std::filesystem::remove(prefix + suffix);
}

TEST_CASE("lattice implicit run summary reports negativity diagnostics") {
  // tiny lattice implicit run; min phi is recorded whatever its sign
  const std::string prefix =
      (std::filesystem::temp_directory_path() / "assn_lat_test").string();
  ConfigMap m{{"problem", "lattice"}, {"solver", "implicit"}, {"nx", "28"}, {"ny", "28"},
              {"quad_order", "2"},    {"t_end", "0.4"},       {"out", prefix}};
  const RunOutputs out = run(parse_config(m, {}));
  CHECK(out.steps > 0);
  CHECK(out.gmres_iterations > 0);
  std::ifstream in(prefix + "_summary.txt");
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(all.find("min_phi=") != std::string::npos);
  CHECK(all.find("gmres_iterations=") != std::string::npos);
  for (const char* suffix :
       {"_phi.csv", "_cuts.csv", "_rings.csv", "_ring_stats.csv", "_summary.txt"})
    std::filesystem::remove(prefix + suffix);
}

}  // TEST_SUITE
