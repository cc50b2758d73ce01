#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "singular_sl/errors.hpp"
#include "singular_sl/experiments.hpp"

namespace {

using singular_sl::RunConfig;

// Options shared by solve and verify; collected as text and applied on top of
// the config file so that flags always win.
struct RunFlags {
  std::string config;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "key = value file with [section] headers")->check(CLI::ExistingFile);
    const std::vector<std::pair<std::string, std::string>> keys{
        {"alpha", "comma-separated alpha list"},
        {"p", "comma-separated Lebesgue exponents (inf allowed)"},
        {"bc", "dirichlet or neumann"},
        {"rhs", "';'-separated rhs selectors"},
        {"engine", "closed_form, galerkin or both"},
        {"n", "Galerkin element count"},
        {"gamma", "mesh grading exponent or auto"},
        {"tolerance", "residual tolerance for solve"},
        {"samples", "random rhs per cell"},
        {"seed", "random seed, or none"},
        {"output", "output directory"},
        {"format", "csv, json or both"}};
    for (const auto& [key, help] : keys) app->add_option("--" + key, values[key], help);
  }

  RunConfig resolve(const CLI::App* app) const {
    RunConfig c = config.empty() ? singular_sl::default_config() : singular_sl::load_config(config);
    for (const auto& [key, value] : values) {
      if (app->count("--" + key) > 0) singular_sl::set_option(c, key, value);
    }
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver and verification suite for -(x^(2a) u')' + u = f on (0, 1]"};
  app.require_subcommand(1);

  auto* bessel = app.add_subcommand("bessel", "tabulate I_nu, K_n and their derivatives");
  double nu = 0.0;
  std::vector<double> ys;
  bessel->add_option("--nu", nu, "order (>= 0)")->required();
  bessel->add_option("--y", ys, "arguments")->required()->delimiter(',');

  auto* solve = app.add_subcommand("solve", "solve every configured cell and write solution tables");
  RunFlags solve_flags;
  solve_flags.attach(solve);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  RunFlags verify_flags;
  verify_flags.attach(verify);
  std::string suite;
  verify->add_option("--suite", suite, "dirichlet, neumann, optimality, counterexample or convergence")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : singular_sl::kExitDomain;
  }

  try {
    if (*bessel) return singular_sl::cmd_bessel(nu, ys, std::cout);
    if (*solve) return singular_sl::cmd_solve(solve_flags.resolve(solve), std::cout);
    return singular_sl::cmd_verify(verify_flags.resolve(verify), singular_sl::parse_suite(suite), std::cout);
  } catch (const singular_sl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return singular_sl::kExitDomain;
  } catch (const singular_sl::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return singular_sl::kExitDomain;
  }
}
