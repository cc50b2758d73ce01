#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "singular_sl/errors.hpp"
#include "singular_sl/experiments.hpp"
#include "singular_sl/report_io.hpp"

namespace {

using namespace singular_sl;
namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("singular_sl_experiments_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig small_config(const fs::path& out) {
  RunConfig c = default_config();
  c.output_dir = out;
  c.samples = 5;
  return c;
}

TEST(Config, Defaults) {
  const RunConfig c = default_config();
  EXPECT_EQ(c.alphas.size(), 10u);
  EXPECT_EQ(c.alphas.front(), -2.0);
  EXPECT_EQ(c.alphas.back(), 0.9);
  ASSERT_EQ(c.ps.size(), 3u);
  EXPECT_TRUE(c.ps[2].is_inf());
  EXPECT_EQ(c.rhs, std::vector<std::string>{"one"});
  ASSERT_TRUE(c.seed.has_value());
  EXPECT_EQ(*c.seed, 20240611u);
}

TEST(Config, SetOption) {
  RunConfig c = default_config();
  set_option(c, "alpha", "0.25, 0.4");
  set_option(c, "p", "1,inf");
  set_option(c, "bc", "dirichlet");
  set_option(c, "rhs", "one;poly:1,-1,2");
  set_option(c, "engine", "both");
  set_option(c, "n", "128");
  set_option(c, "gamma", "auto");
  set_option(c, "seed", "none");
  EXPECT_EQ(c.alphas, (std::vector<double>{0.25, 0.4}));
  EXPECT_TRUE(c.ps[1].is_inf());
  EXPECT_EQ(c.bc, BoundaryKind::Dirichlet);
  EXPECT_EQ(c.rhs, (std::vector<std::string>{"one", "poly:1,-1,2"}));
  EXPECT_EQ(c.engine, EngineChoice::Both);
  EXPECT_EQ(c.mesh_n, 128);
  EXPECT_EQ(c.gamma, 0.0);
  EXPECT_FALSE(c.seed.has_value());
}

TEST(Config, Errors) {
  RunConfig c = default_config();
  EXPECT_THROW(set_option(c, "colour", "red"), ConfigError);
  EXPECT_THROW(set_option(c, "alpha", "abc"), ConfigError);
  EXPECT_THROW(set_option(c, "alpha", ""), ConfigError);
  EXPECT_THROW(set_option(c, "samples", "0"), ConfigError);
  EXPECT_THROW(set_option(c, "n", "2"), ConfigError);
  EXPECT_THROW(set_option(c, "engine", "spectral"), ConfigError);
  EXPECT_THROW(parse_suite("stokes"), ConfigError);
  EXPECT_EQ(parse_suite("counterexample"), Suite::Counterexample);
}

TEST(Config, IniFile) {
  const fs::path dir = scratch("ini");
  {
    std::ofstream ini(dir / "run.ini");
    ini << "[problem]\nalpha = 0.25\nbc = dirichlet\n\n[study]\nsamples = 7\nseed = 99\n";
  }
  RunConfig c = load_config(dir / "run.ini");
  EXPECT_EQ(c.alphas, std::vector<double>{0.25});
  EXPECT_EQ(c.bc, BoundaryKind::Dirichlet);
  EXPECT_EQ(c.samples, 7);
  EXPECT_EQ(*c.seed, 99u);
  set_option(c, "samples", "3");
  EXPECT_EQ(c.samples, 3);
  EXPECT_THROW(load_config(dir / "missing.ini"), ConfigError);
  {
    std::ofstream ini(dir / "bad.ini");
    ini << "[problem]\nwidth = 3\n";
  }
  EXPECT_THROW(load_config(dir / "bad.ini"), ConfigError);
}

TEST(Config, JsonIsStable) { EXPECT_EQ(config_json(default_config()), config_json(default_config())); }

TEST(RunSuite, MissingSeed) {
  RunConfig c = small_config(scratch("seed"));
  c.seed.reset();
  EXPECT_THROW(run_suite(c, Suite::Dirichlet), ConfigError);
}

TEST(RunSuite, NoCell) {
  RunConfig c = small_config(scratch("nocell"));
  c.alphas = {0.6, 0.75};
  EXPECT_THROW(run_suite(c, Suite::Dirichlet), ConfigError);
}

TEST(Bessel, Rows) {
  std::ostringstream out;
  EXPECT_EQ(cmd_bessel(0.0, {0.0, 1.0}, out), kExitOk);
  const auto rows = parse_csv(out.str());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"nu", "y", "I", "K", "I_prime", "K_prime"}));
  EXPECT_EQ(rows[1][3], "inf");
  EXPECT_NEAR(parse_number(rows[2][3]), 0.42102443824070834, 1e-12);
  std::ostringstream half;
  EXPECT_EQ(cmd_bessel(0.5, {1.0}, half), kExitOk);
  EXPECT_EQ(parse_csv(half.str())[1][3], "nan");
  std::ostringstream bad;
  EXPECT_EQ(cmd_bessel(0.0, {-1.0}, bad), kExitDomain);
}

TEST(Solve, ZeroAndManufactured) {
  const fs::path dir = scratch("solve");
  RunConfig c = small_config(dir);
  c.alphas = {0.25, 0.75};
  c.ps = {LebesgueExponent(2.0)};
  c.rhs = {"zero", "manufactured_neumann"};
  c.engine = EngineChoice::Both;
  std::ostringstream out;
  EXPECT_EQ(cmd_solve(c, out), kExitOk) << out.str();
  EXPECT_TRUE(fs::exists(dir / "solution_closed_form_a0.25_p2_manufactured_neumann.csv"));
  EXPECT_TRUE(fs::exists(dir / "solution_galerkin_a0.75_p2_zero.json"));
}

TEST(Solve, Rejections) {
  RunConfig c = small_config(scratch("reject"));
  c.alphas = {0.9};
  c.bc = BoundaryKind::Dirichlet;
  std::ostringstream out;
  EXPECT_EQ(cmd_solve(c, out), kExitDomain);
  c.alphas = {-1.0};
  c.bc = BoundaryKind::Neumann;
  c.engine = EngineChoice::Galerkin;
  EXPECT_EQ(cmd_solve(c, out), kExitDomain);
}

TEST(Verify, DirichletSmallCell) {
  const fs::path dir = scratch("verify_dirichlet");
  RunConfig c = small_config(dir);
  c.alphas = {-1.0};
  c.ps = {LebesgueExponent(1.0)};
  std::ostringstream out;
  EXPECT_EQ(cmd_verify(c, Suite::Dirichlet, out), kExitOk) << out.str();
  EXPECT_TRUE(fs::exists(dir / "verify_dirichlet.json"));
  EXPECT_TRUE(fs::exists(dir / "verify_dirichlet_checks.csv"));
  EXPECT_NE(out.str().find("checks passed"), std::string::npos);
}

TEST(Verify, ConvergenceSmallCell) {
  RunConfig c = small_config(scratch("verify_convergence"));
  c.alphas = {0.25};
  std::ostringstream out;
  EXPECT_EQ(cmd_verify(c, Suite::Convergence, out), kExitOk) << out.str();
}

TEST(Verify, DeterministicReports) {
  const fs::path dir = scratch("verify_repeat");
  RunConfig c = small_config(dir);
  c.alphas = {0.25};
  c.ps = {LebesgueExponent(2.0)};
  std::ostringstream out;
  cmd_verify(c, Suite::Dirichlet, out);
  const std::string first = read_text(dir / "verify_dirichlet.json");
  const std::string first_csv = read_text(dir / "verify_dirichlet_checks.csv");
  cmd_verify(c, Suite::Dirichlet, out);
  EXPECT_EQ(strip_timestamps(first), strip_timestamps(read_text(dir / "verify_dirichlet.json")));
  EXPECT_EQ(first_csv, read_text(dir / "verify_dirichlet_checks.csv"));
}

}  // namespace
