#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "hamstab/cli.hpp"
#include "hamstab/coeffs.hpp"
#include "hamstab/errors.hpp"
#include "hamstab/hill.hpp"
#include "hamstab/systems.hpp"

using namespace hamstab;

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"hamstab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/hamstab_test_") + name;
}

}  // namespace

TEST_CASE("hill command writes the expected value") {
  const std::string out = temp_path("hill.json");
  CHECK(run_cli({"hill", "--system", "counterexample33", "--alpha", "1", "--out", out,
                 "--format", "json"}) == 0);
  const auto js = nlohmann::json::parse(slurp(out));
  CHECK(std::abs(js.at("value").get<double>() - std::exp(-1.0)) < 1e-9);
  std::remove(out.c_str());
}

TEST_CASE("trace command emits csv") {
  const std::string out = temp_path("trace.csv");
  CHECK(run_cli({"trace", "--system", "counterexample33", "--out", out}) == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("quantity,value\ntr1,1\n", 0) == 0);
  std::remove(out.c_str());
}

TEST_CASE("eigs command lists the ladder") {
  const std::string out = temp_path("eigs.csv");
  CHECK(run_cli({"eigs", "--system", "dirichlet-free", "--window", "-10", "10", "--out",
                 out}) == 0);
  const std::string csv = slurp(out);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 6 rows
  std::remove(out.c_str());
}

TEST_CASE("galerkin sequence output") {
  const std::string out = temp_path("galerkin.csv");
  CHECK(run_cli({"galerkin", "--system", "dirichlet-free", "--N-sequence", "8", "16",
                 "--out", out}) == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("N,value\n8,", 0) == 0);
  std::remove(out.c_str());
}

TEST_CASE("parity command on the no-eigenvalue system") {
  const std::string out = temp_path("parity.json");
  CHECK(run_cli({"parity", "--system", "counterexample33", "--out", out, "--format",
                 "json"}) == 0);
  const auto js = nlohmann::json::parse(slurp(out));
  CHECK(js.at("sign").get<int>() == 1);
  CHECK(js.at("relative_morse_index").get<int>() == 0);
  CHECK(js.at("parity_consistent").get<bool>());
  std::remove(out.c_str());
}

TEST_CASE("decompose command reports small residuals") {
  const std::string out = temp_path("decompose.json");
  CHECK(run_cli({"decompose", "--system", "lagrange", "--beta", "1", "--e", "0.1", "--out",
                 out, "--format", "json"}) == 0);
  const auto js = nlohmann::json::parse(slurp(out));
  CHECK(js.at("product_residual").get<double>() < 1e-7);
  std::remove(out.c_str());
}

TEST_CASE("scan output is deterministic") {
  const std::string out1 = temp_path("scan1.csv");
  const std::string out2 = temp_path("scan2.csv");
  CHECK(run_cli({"scan", "--kind", "lagrange", "--grid", "9", "--out", out1}) == 0);
  CHECK(run_cli({"scan", "--kind", "lagrange", "--grid", "9", "--out", out2}) == 0);
  CHECK(slurp(out1) == slurp(out2));
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("config file supplies values and rejects unknown keys") {
  const std::string cfg = temp_path("job.json");
  {
    std::ofstream out(cfg);
    out << R"({"system": {"name": "counterexample33"},
               "numerics": {"alpha": 1.0},
               "output": {"path": ")" << temp_path("cfg_out.json")
        << R"(", "format": "json"}})";
  }
  CHECK(run_cli({"hill", "--config", cfg}) == 0);
  const auto js = nlohmann::json::parse(slurp(temp_path("cfg_out.json")));
  CHECK(std::abs(js.at("value").get<double>() - std::exp(-1.0)) < 1e-9);

  {
    std::ofstream out(cfg);
    out << R"({"system": {"name": "counterexample33", "mystery": 1}})";
  }
  CHECK(run_cli({"hill", "--config", cfg}) == 2);

  std::remove(cfg.c_str());
  std::remove(temp_path("cfg_out.json").c_str());
}

TEST_CASE("flags override the config file") {
  const std::string cfg = temp_path("job2.json");
  const std::string out = temp_path("cfg_out2.json");
  {
    std::ofstream o(cfg);
    o << R"({"numerics": {"alpha": 0.0}})";
  }
  CHECK(run_cli({"hill", "--system", "dirichlet-free", "--config", cfg, "--alpha", "1",
                 "--out", out, "--format", "json"}) == 0);
  const auto js = nlohmann::json::parse(slurp(out));
  CHECK(std::abs(js.at("value").get<double>() - std::cos(1.0)) < 1e-9);
  std::remove(cfg.c_str());
  std::remove(out.c_str());
}

TEST_CASE("configuration errors exit with code 2") {
  CHECK(run_cli({"hill", "--system", "no-such-system"}) == 2);
  CHECK(run_cli({"hill", "--system", "counterexample33", "--format", "yaml"}) == 2);
  CHECK(run_cli({"hill", "--system", "counterexample33", "--tol", "-1"}) == 2);
  CHECK(run_cli({"hill", "--out", "/nonexistent-dir/x.csv", "--system",
                 "counterexample33"}) == 2);
}

TEST_CASE("numerical failures exit with code 3") {
  // theta = 0 puts zero in the free spectrum: degenerate base problem.
  CHECK(run_cli({"hill", "--system", "dirichlet-free", "--theta", "0"}) == 3);
}

TEST_CASE("sampled coefficient round trip through the file format") {
  const BoundaryProblem p = make_ere_problem({EREFamily::lagrange, 1.0, 0.2}, true);
  const std::string table = temp_path("coeffs.txt");
  save_sampled_coefficients(table, p.b, p.d, 2001);

  auto [b2, d2] = load_sampled_coefficients(table);
  CHECK(b2.n() == 2);
  const double builtin = hill_ratio(p.b, p.d, p.boundary, 1.0);
  const double loaded = hill_ratio(b2, d2, p.boundary, 1.0);
  CHECK(std::abs(builtin - loaded) < 1e-6);
  std::remove(table.c_str());
}

TEST_CASE("two identical rows define a constant path") {
  const std::string table = temp_path("const.txt");
  {
    std::ofstream o(table);
    o << "0 1 0 2 0.5 0 0.25\n";
    o << "1 1 0 2 0.5 0 0.25\n";
  }
  auto [b, d] = load_sampled_coefficients(table);
  Mat expected_b(2, 2), expected_d(2, 2);
  expected_b << 1, 0, 0, 2;
  expected_d << 0.5, 0, 0, 0.25;
  CHECK(max_abs(b(0.37) - expected_b) < 1e-12);
  CHECK(max_abs(d(0.99) - expected_d) < 1e-12);
  std::remove(table.c_str());
}

TEST_CASE("decreasing sample times are rejected") {
  const std::string table = temp_path("bad.txt");
  {
    std::ofstream o(table);
    o << "0 1 0 1 1 0 1\n";
    o << "0.5 1 0 1 1 0 1\n";
    o << "0.4 1 0 1 1 0 1\n";
  }
  CHECK_THROWS_AS(load_sampled_coefficients(table), FormatError);
  std::remove(table.c_str());
}

TEST_CASE("sampled systems require a boundary") {
  const std::string table = temp_path("nobnd.txt");
  {
    std::ofstream o(table);
    o << "0 0 0 0 1 0 1\n";
    o << "1 0 0 0 1 0 1\n";
  }
  CHECK(run_cli({"hill", "--system-file", table}) == 2);
  CHECK(run_cli({"hill", "--system-file", table, "--theta", "1.5707963267948966"}) == 0);
  std::remove(table.c_str());
}

TEST_CASE("scan output does not depend on the worker count") {
  const std::string out1 = temp_path("scan_t1.csv");
  const std::string out4 = temp_path("scan_t4.csv");
  setenv("HAMSTAB_THREADS", "1", 1);
  CHECK(run_cli({"scan", "--kind", "lagrange", "--grid", "7", "--out", out1}) == 0);
  setenv("HAMSTAB_THREADS", "4", 1);
  CHECK(run_cli({"scan", "--kind", "lagrange", "--grid", "7", "--out", out4}) == 0);
  unsetenv("HAMSTAB_THREADS");
  CHECK(slurp(out1) == slurp(out4));
  std::remove(out1.c_str());
  std::remove(out4.c_str());
}
