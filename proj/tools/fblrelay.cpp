// fblrelay: sweeps, optimizations, scheme comparisons and the
// quadrature-vs-Monte-Carlo battery for the two-hop relay model.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "fblrelay/cli.hpp"
#include "fblrelay/errors.hpp"

using namespace fblrelay;

namespace {

std::string flag_name(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return "--" + key;
}

int emit(const cli::Output& out, const std::string& path) {
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
  if (path.empty()) {
    std::cout << out.text;
  } else {
    std::ofstream f(path);
    if (!f) throw ValidationError("output", "cannot write '" + path + "'");
    f << out.text;
  }
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-blocklength two-hop relay throughput and MSDR under Rayleigh fading"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string scenario_path;
  std::string output_path;
  std::uint64_t seed = 42;
  double mc_samples = 1e6;
  std::map<std::string, std::string> overrides;

  app.add_option("--scenario", scenario_path, "Scenario file (key = value lines)");
  app.add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
  app.add_option("--mc-samples", mc_samples, "Monte Carlo draws per estimate")->capture_default_str();
  app.add_option("-o,--output", output_path, "Write CSV here instead of stdout");
  for (const auto& key : scenario_keys()) {
    app.add_option_function<std::string>(
        flag_name(key), [&overrides, key](const std::string& v) { overrides[key] = v; },
        "Scenario field " + key);
  }

  auto* sweep = app.add_subcommand("sweep", "Evaluate schemes over a grid");
  std::string variable = "eta";
  std::string grid_text;
  double lo = cli::kEtaLo;
  double hi = kFadingMedian;
  std::size_t n = 100;
  std::vector<std::string> schemes{"relay_avg"};
  std::vector<std::string> metrics{"bl_throughput", "msdr"};
  sweep->add_option("--variable", variable, "coding_rate | eta | blocklength")->capture_default_str();
  sweep->add_option("--grid", grid_text, "Comma-separated grid; overrides --lo/--hi/--n");
  sweep->add_option("--lo", lo, "Grid start")->capture_default_str();
  sweep->add_option("--hi", hi, "Grid end")->capture_default_str();
  sweep->add_option("--n", n, "Grid points")->capture_default_str();
  sweep->add_option("--schemes", schemes, "Subset of relay_avg relay_perfect direct_matched "
                                          "direct_weighted shannon_ergodic outage")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--metrics", metrics, "Subset of bl_throughput msdr expected_error coding_rate")
      ->delimiter(',')
      ->capture_default_str();

  auto* optimize = app.add_subcommand("optimize", "Optimal weight factor eta");
  std::string objective = "both";
  optimize->add_option("--objective", objective, "bl_throughput | msdr | both")->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Compare two schemes on a shared grid");
  std::string pair = "relay_vs_direct";
  std::string cmp_variable;
  std::string cmp_grid;
  compare->add_option("--pair", pair, "relay_vs_direct | avg_vs_perfect | fbl_vs_outage")
      ->capture_default_str();
  compare->add_option("--variable", cmp_variable,
                      "eta | blocklength (default: blocklength for avg_vs_perfect, else eta)");
  compare->add_option("--grid", cmp_grid, "Comma-separated grid (default: 100 eta points or m in "
                                          "100,200,500,1000,2000)");

  auto* validate = app.add_subcommand("validate", "Quadrature vs Monte Carlo battery");
  std::size_t points = 20;
  validate->add_option("--points", points, "Randomized parameter points")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Scenario scenario = scenario_path.empty() ? Scenario{} : load_scenario_file(scenario_path);
    for (const auto& [key, value] : overrides) set_field(scenario, key, value);
    if (!(mc_samples >= 1.0) || mc_samples > 1e12) {
      throw ValidationError("mc_samples", "must be at least 1");
    }
    const cli::RunOptions run{seed, static_cast<std::uint64_t>(mc_samples)};

    if (sweep->parsed()) {
      cli::SweepSpec spec;
      spec.variable = cli::parse_variable(variable);
      spec.grid = sweep->count("--grid") ? cli::parse_grid(grid_text) : cli::linspace(lo, hi, n);
      spec.schemes = schemes;
      spec.metrics = metrics;
      return emit(cli::cmd_sweep(scenario, spec, run), output_path);
    }
    if (optimize->parsed()) {
      return emit(cli::cmd_optimize(scenario, cli::parse_objective(objective)), output_path);
    }
    if (compare->parsed()) {
      const cli::Pair p = cli::parse_pair(pair);
      const cli::Variable v = !cmp_variable.empty() ? cli::parse_variable(cmp_variable)
                              : p == cli::Pair::avg_vs_perfect ? cli::Variable::blocklength
                                                               : cli::Variable::eta;
      std::vector<double> grid;
      if (compare->count("--grid")) {
        grid = cli::parse_grid(cmp_grid);
      } else if (v == cli::Variable::blocklength) {
        grid = {100, 200, 500, 1000, 2000};
      } else {
        grid = cli::linspace(cli::kEtaLo, kFadingMedian, 100);
      }
      return emit(cli::cmd_compare(scenario, p, v, grid, run), output_path);
    }
    return emit(cli::cmd_validate(scenario, run, points), output_path);
  } catch (const ValidationError& e) {
    std::cerr << "invalid " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NonConvergence& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}
