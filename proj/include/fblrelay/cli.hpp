#pragma once

// Command implementations behind the `fblrelay` executable. Each command
// returns its CSV/report text; the executable only parses flags and prints.

#include <cstdint>
#include <string>
#include <vector>

#include "fblrelay/scenario.hpp"

namespace fblrelay::cli {

enum class Variable { coding_rate, eta, blocklength };

struct SweepSpec {
  Variable variable = Variable::eta;
  std::vector<double> grid;
  std::vector<std::string> schemes{"relay_avg"};
  std::vector<std::string> metrics{"bl_throughput", "msdr"};

  /// Throws ValidationError on an empty grid, scheme or metric list, or unknown names.
  void validate() const;
};

struct RunOptions {
  std::uint64_t seed = 42;
  std::uint64_t mc_samples = 1'000'000;
};

struct Output {
  std::string text;
  std::vector<std::string> warnings;  ///< for stderr
  int exit_code = 0;
};

inline constexpr double kEtaLo = 0.01;

const std::vector<std::string>& scheme_names();
const std::vector<std::string>& metric_names();
Variable parse_variable(const std::string& name);
std::string to_string(Variable v);

/// n evenly spaced points on [lo, hi]; n == 1 gives {lo}.
std::vector<double> linspace(double lo, double hi, std::size_t n);
/// Comma-separated numbers.
std::vector<double> parse_grid(const std::string& text);

/// One row per grid point, one column per (scheme, metric); "nan" where a
/// scheme does not define the metric for the swept variable.
Output cmd_sweep(const Scenario& scenario, const SweepSpec& spec, const RunOptions& run);

enum class Objective { bl_throughput, msdr, both };
Objective parse_objective(const std::string& name);

struct EtaOptimum {
  double eta = 0.0;
  double value = 0.0;
  int iterations = 0;
  double bracket = 0.0;
  std::string flag;
};

/// Maximizes C_BL or MSDR of average-CSI relaying over eta in [0.01, ln 2].
EtaOptimum optimize_eta(const Scenario& scenario, Objective objective, double tol = 1e-4);

Output cmd_optimize(const Scenario& scenario, Objective objective);

enum class Pair { relay_vs_direct, avg_vs_perfect, fbl_vs_outage };
Pair parse_pair(const std::string& name);

/// Evaluates both sides of `pair` over `grid` of `variable`, then appends
/// `# summary` lines with advantage ratios and gap statistics.
Output cmd_compare(const Scenario& scenario, Pair pair, Variable variable,
                   const std::vector<double>& grid, const RunOptions& run);

struct BatteryPoint {
  double r = 0.0;
  Blocklength m = 0;
  LinkGains gains;
};

/// Randomized (r, m, gains) points for the quadrature-vs-Monte-Carlo battery:
/// m in [100, 2000], link SNRs of a few dB to 20 dB, r up to the mean bottleneck capacity.
std::vector<BatteryPoint> make_battery(std::uint64_t seed, std::size_t count,
                                       const SystemParams& params);

/// Quadrature vs Monte Carlo (overall error and decode-event throughput) on
/// the battery; exit_code 1 if any row disagrees by more than 3 standard errors.
Output cmd_validate(const Scenario& scenario, const RunOptions& run, std::size_t points = 20);

}  // namespace fblrelay::cli
