#include "fblrelay/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "fblrelay/baselines.hpp"
#include "fblrelay/errors.hpp"
#include "fblrelay/fbl_core.hpp"
#include "fblrelay/link_layer.hpp"
#include "fblrelay/montecarlo.hpp"
#include "fblrelay/optimize.hpp"
#include "fblrelay/relay_phy.hpp"

namespace fblrelay::cli {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::string unit_of(const std::string& metric) {
  return metric == "expected_error" ? "[prob]" : "[bit/cu]";
}

std::string axis_header(Variable v) {
  switch (v) {
    case Variable::coding_rate: return "r[bit/cu]";
    case Variable::eta: return "eta";
    case Variable::blocklength: return "m[symbols]";
  }
  return "x";
}

// Evaluates f(0..n-1) on a thread pool; results keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& f) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Blocklength to_blocklength(double x) {
  if (!(x >= 1.0) || x != std::floor(x)) {
    throw ValidationError("grid", "blocklength grid values must be positive integers");
  }
  return static_cast<Blocklength>(x);
}

// scheme -> metric -> value
using Cell = std::map<std::string, std::map<std::string, double>>;

struct Evaluator {
  BuiltScenario built;
  Variable variable;
  RunOptions run;
  std::vector<std::string> schemes;
  std::optional<McEstimate> ergodic;
  std::map<Blocklength, PerfectCsiResult> perfect;

  Evaluator(const Scenario& s, Variable v, const std::vector<double>& grid, const RunOptions& r,
            std::vector<std::string> sch)
      : built(build(s)), variable(v), run(r), schemes(std::move(sch)) {
    if (contains(schemes, "shannon_ergodic")) {
      if (run.mc_samples < 1'000'000) throw ValidationError("mc_samples", "shannon_ergodic needs at least 1e6");
      ergodic = ergodic_capacity_relay(built.gains, built.params, run.mc_samples, run.seed);
    }
    if (contains(schemes, "relay_perfect")) {
      if (run.mc_samples < 100'000) throw ValidationError("mc_samples", "relay_perfect needs at least 1e5");
      std::vector<Blocklength> ms;
      if (variable == Variable::blocklength) {
        for (double x : grid) ms.push_back(to_blocklength(x));
      } else {
        ms.push_back(built.params.m);
      }
      std::sort(ms.begin(), ms.end());
      ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
      // Perfect-CSI points share seeds (common random numbers) so curves are smooth.
      for (Blocklength m : ms) {
        perfect.emplace(m, bl_throughput_perfect_csi(m, built.gains, built.params, run.mc_samples,
                                                     run.seed));
      }
    }
  }

  Cell evaluate(double x) const {
    SystemParams p = built.params;
    const LinkGains& g = built.gains;
    const QoSPair& qos = built.qos;
    std::optional<double> fixed_rate;
    switch (variable) {
      case Variable::eta:
        p.eta = x;
        p.validate();
        break;
      case Variable::blocklength:
        p.m = to_blocklength(x);
        p.validate();
        break;
      case Variable::coding_rate:
        if (!(x >= 0.0)) throw ValidationError("grid", "coding rates must be non-negative");
        fixed_rate = x;
        break;
    }
    const Blocklength m = p.m;
    const double r_relay = fixed_rate ? *fixed_rate : select_rate_avg_csi(g, p).rate;

    Cell cell;
    auto fill_all_nan = [&](const std::string& scheme) {
      for (const auto& metric : metric_names()) cell[scheme][metric] = kNan;
    };
    for (const auto& scheme : schemes) {
      fill_all_nan(scheme);
      auto& c = cell[scheme];
      if (scheme == "relay_avg") {
        const double e = expected_overall_error(r_relay, m, g, p);
        c["coding_rate"] = r_relay;
        c["expected_error"] = e;
        c["bl_throughput"] = r_relay * (1.0 - e) / 2.0;
        c["msdr"] = msdr(r_relay, m, e, qos).value;
      } else if (scheme == "direct_matched" || scheme == "direct_weighted") {
        if (scheme == "direct_weighted" && fixed_rate) continue;
        const DirectMode mode = scheme == "direct_matched" ? DirectMode{MatchedRate{r_relay}}
                                                           : DirectMode{WeightedCsi{}};
        const SchemeResult d = bl_throughput_direct(2 * m, g, p, mode);
        c["coding_rate"] = d.coding_rate;
        c["expected_error"] = d.expected_error;
        c["bl_throughput"] = d.bl_throughput;
        c["msdr"] = msdr_direct(d.coding_rate, 2 * m, d.expected_error, qos).value;
      } else if (scheme == "outage") {
        const double r = fixed_rate ? *fixed_rate : shannon_c(p.eta * g.bottleneck(), p);
        const double p_out = outage_prob_relay(r, g, p);
        c["coding_rate"] = r;
        c["expected_error"] = p_out;
        c["bl_throughput"] = r * (1.0 - p_out) / 2.0;
      } else if (scheme == "shannon_ergodic") {
        c["bl_throughput"] = ergodic->mean;
      } else if (scheme == "relay_perfect") {
        const PerfectCsiResult& res = perfect.at(m);
        c["coding_rate"] = res.rate.mean;
        c["expected_error"] = res.error.mean;
        c["bl_throughput"] = res.throughput.mean;
      }
    }
    return cell;
  }

  std::vector<Cell> evaluate_grid(const std::vector<double>& grid) const {
    return parallel_map<Cell>(grid.size(), [&](std::size_t i) { return evaluate(grid[i]); });
  }

  void add_mc_warnings(Output& out) const {
    for (const auto& [m, res] : perfect) {
      if (res.optimizer_failures > 0) {
        out.warnings.push_back("relay_perfect at m=" + std::to_string(m) + ": " +
                               std::to_string(res.optimizer_failures) +
                               " per-period optimizations did not converge");
      }
    }
  }
};

std::string summary_line(const std::string& key, const std::string& value) {
  return "# summary " + key + "=" + value + "\n";
}

}  // namespace

const std::vector<std::string>& scheme_names() {
  static const std::vector<std::string> v{"relay_avg",       "relay_perfect", "direct_matched",
                                          "direct_weighted", "shannon_ergodic", "outage"};
  return v;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> v{"bl_throughput", "msdr", "expected_error", "coding_rate"};
  return v;
}

Variable parse_variable(const std::string& name) {
  if (name == "coding_rate") return Variable::coding_rate;
  if (name == "eta") return Variable::eta;
  if (name == "blocklength") return Variable::blocklength;
  throw ValidationError("variable", "expected coding_rate, eta or blocklength, got '" + name + "'");
}

std::string to_string(Variable v) {
  switch (v) {
    case Variable::coding_rate: return "coding_rate";
    case Variable::eta: return "eta";
    case Variable::blocklength: return "blocklength";
  }
  return "unknown";
}

void SweepSpec::validate() const {
  if (grid.empty()) throw ValidationError("grid", "must not be empty");
  if (schemes.empty()) throw ValidationError("schemes", "must not be empty");
  if (metrics.empty()) throw ValidationError("metrics", "must not be empty");
  for (const auto& s : schemes) {
    if (!contains(scheme_names(), s)) throw ValidationError("schemes", "unknown scheme '" + s + "'");
  }
  for (const auto& m : metrics) {
    if (!contains(metric_names(), m)) throw ValidationError("metrics", "unknown metric '" + m + "'");
  }
  for (double x : grid) {
    if (!std::isfinite(x)) throw ValidationError("grid", "values must be finite");
  }
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  v.back() = hi;
  return v;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("grid", "not a number: '" + item + "'");
    }
  }
  return out;
}

Output cmd_sweep(const Scenario& scenario, const SweepSpec& spec, const RunOptions& run) {
  spec.validate();
  const Evaluator ev(scenario, spec.variable, spec.grid, run, spec.schemes);
  const auto cells = ev.evaluate_grid(spec.grid);

  Output out;
  out.warnings = ev.built.warnings;
  ev.add_mc_warnings(out);
  std::string& csv = out.text;
  csv += axis_header(spec.variable);
  for (const auto& s : spec.schemes) {
    for (const auto& m : spec.metrics) csv += "," + s + "." + m + unit_of(m);
  }
  csv += "\n";
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    csv += num(spec.grid[i]);
    for (const auto& s : spec.schemes) {
      for (const auto& m : spec.metrics) csv += "," + num(cells[i].at(s).at(m));
    }
    csv += "\n";
  }
  csv += summary_line("points", std::to_string(spec.grid.size()));
  csv += summary_line("seed", std::to_string(run.seed));
  csv += summary_line("mc_samples", std::to_string(run.mc_samples));
  return out;
}

Objective parse_objective(const std::string& name) {
  if (name == "bl_throughput") return Objective::bl_throughput;
  if (name == "msdr") return Objective::msdr;
  if (name == "both") return Objective::both;
  throw ValidationError("objective", "expected bl_throughput, msdr or both, got '" + name + "'");
}

EtaOptimum optimize_eta(const Scenario& scenario, Objective objective, double tol) {
  if (objective == Objective::both) throw DomainError("optimize_eta: pick a single objective");
  const BuiltScenario b = build(scenario);
  auto f = [&](double eta) {
    SystemParams p = b.params;
    p.eta = eta;
    const SchemeResult res = evaluate_relay_avg_csi(b.gains, p);
    if (objective == Objective::bl_throughput) return res.bl_throughput;
    return msdr(res.coding_rate, p.m, res.expected_error, b.qos).value;
  };
  const OptResult r = maximize_unimodal(f, kEtaLo, kFadingMedian, tol);
  return {r.argmax, r.value, r.iterations, r.bracket, std::string(to_string(r.flag))};
}

Output cmd_optimize(const Scenario& scenario, Objective objective) {
  Output out;
  out.warnings = build(scenario).warnings;
  std::vector<std::pair<std::string, Objective>> todo;
  if (objective != Objective::msdr) todo.emplace_back("bl_throughput", Objective::bl_throughput);
  if (objective != Objective::bl_throughput) todo.emplace_back("msdr", Objective::msdr);

  const auto results = parallel_map<EtaOptimum>(
      todo.size(), [&](std::size_t i) { return optimize_eta(scenario, todo[i].second); });

  out.text = "objective,eta_star,value[bit/cu],iterations,bracket,flag\n";
  for (std::size_t i = 0; i < todo.size(); ++i) {
    const auto& r = results[i];
    out.text += todo[i].first + "," + num(r.eta) + "," + num(r.value) + "," +
                std::to_string(r.iterations) + "," + num(r.bracket) + "," + r.flag + "\n";
  }
  if (results.size() == 2) {
    out.text += summary_line("eta_star_difference", num(results[1].eta - results[0].eta));
  }
  return out;
}

Pair parse_pair(const std::string& name) {
  if (name == "relay_vs_direct") return Pair::relay_vs_direct;
  if (name == "avg_vs_perfect") return Pair::avg_vs_perfect;
  if (name == "fbl_vs_outage") return Pair::fbl_vs_outage;
  throw ValidationError("pair", "expected relay_vs_direct, avg_vs_perfect or fbl_vs_outage, got '" +
                                    name + "'");
}

Output cmd_compare(const Scenario& scenario, Pair pair, Variable variable,
                   const std::vector<double>& grid, const RunOptions& run) {
  if (grid.empty()) throw ValidationError("grid", "must not be empty");

  struct Column {
    std::string scheme;
    std::string metric;
  };
  std::vector<std::string> schemes;
  std::vector<Column> columns;
  switch (pair) {
    case Pair::relay_vs_direct:
      schemes = {"relay_avg", "direct_matched", "direct_weighted"};
      for (const char* m : {"bl_throughput", "msdr"}) {
        for (const auto& s : schemes) columns.push_back({s, m});
      }
      break;
    case Pair::avg_vs_perfect:
      schemes = {"relay_avg", "relay_perfect", "outage", "shannon_ergodic"};
      for (const auto& s : schemes) columns.push_back({s, "bl_throughput"});
      break;
    case Pair::fbl_vs_outage:
      schemes = {"relay_avg", "outage"};
      for (const auto& s : schemes) columns.push_back({s, "bl_throughput"});
      break;
  }

  const Evaluator ev(scenario, variable, grid, run, schemes);
  const auto cells = ev.evaluate_grid(grid);
  auto at = [&](std::size_t i, const std::string& s, const std::string& m) { return cells[i].at(s).at(m); };

  // Relative gaps to the reference scheme, one per grid point.
  struct Gap {
    std::string name;
    std::string scheme;
    std::string reference;
  };
  std::vector<Gap> gaps;
  if (pair == Pair::avg_vs_perfect) {
    gaps = {{"avg_gap_to_outage", "relay_avg", "outage"},
            {"perfect_gap_to_ergodic", "relay_perfect", "shannon_ergodic"}};
  } else if (pair == Pair::fbl_vs_outage) {
    gaps = {{"gap_to_outage", "relay_avg", "outage"}};
  }
  auto gap_at = [&](std::size_t i, const Gap& g) {
    const double ref = at(i, g.reference, "bl_throughput");
    return ref > 0.0 ? (ref - at(i, g.scheme, "bl_throughput")) / ref : kNan;
  };

  Output out;
  out.warnings = ev.built.warnings;
  ev.add_mc_warnings(out);
  std::string& csv = out.text;
  csv += axis_header(variable);
  for (const auto& c : columns) csv += "," + c.scheme + "." + c.metric + unit_of(c.metric);
  for (const auto& g : gaps) csv += "," + g.name + "[rel]";
  csv += "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += num(grid[i]);
    for (const auto& c : columns) csv += "," + num(at(i, c.scheme, c.metric));
    for (const auto& g : gaps) csv += "," + num(gap_at(i, g));
    csv += "\n";
  }

  if (pair == Pair::relay_vs_direct) {
    for (const char* metric : {"bl_throughput", "msdr"}) {
      for (const char* direct : {"direct_matched", "direct_weighted"}) {
        double min_ratio = std::numeric_limits<double>::infinity();
        bool dominates = true;
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const double a = at(i, "relay_avg", metric);
          const double b = at(i, direct, metric);
          if (std::isnan(b)) continue;
          if (!(a > b)) dominates = false;
          if (b > 0.0) min_ratio = std::min(min_ratio, a / b);
        }
        const std::string key = std::string(metric) + ".relay_over_" + direct;
        csv += summary_line(key + ".min_ratio", num(min_ratio));
        csv += summary_line(key + ".dominates", dominates ? "yes" : "no");
      }
    }
  }
  for (const auto& g : gaps) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, gap_at(i, g));
    csv += summary_line(g.name + ".max", num(worst));
    if (variable == Variable::blocklength) {
      // Smallest blocklength from which the gap stays below 2%.
      std::string below = "none";
      for (std::size_t i = grid.size(); i-- > 0;) {
        if (!(std::abs(gap_at(i, g)) < 0.02)) break;
        below = num(grid[i]);
      }
      csv += summary_line(g.name + ".below_2pct_from_m", below);
    }
  }
  csv += summary_line("seed", std::to_string(run.seed));
  csv += summary_line("mc_samples", std::to_string(run.mc_samples));
  return out;
}

std::vector<BatteryPoint> make_battery(std::uint64_t seed, std::size_t count,
                                       const SystemParams& params) {
  // Parameters come from a stream index far above those used by estimates.
  StreamRng rng(seed, std::uint64_t{1} << 62);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  auto gain_for_db = [&](double snr_db) { return std::pow(10.0, snr_db / 10.0) * params.sigma2 / params.p_tx; };

  std::vector<BatteryPoint> pts(count);
  for (auto& pt : pts) {
    pt.m = static_cast<Blocklength>(std::lround(std::exp(uniform(std::log(100.0), std::log(2000.0)))));
    pt.gains.g1 = gain_for_db(uniform(-10.0, 5.0));
    pt.gains.g2 = gain_for_db(uniform(3.0, 20.0));
    pt.gains.g3 = gain_for_db(uniform(3.0, 20.0));
    pt.r = uniform(0.05, 1.0) * shannon_c(pt.gains.bottleneck(), params);
  }
  return pts;
}

Output cmd_validate(const Scenario& scenario, const RunOptions& run, std::size_t points) {
  const BuiltScenario b = build(scenario);
  const auto battery = make_battery(run.seed, points, b.params);

  struct Row {
    double quad_error, mc_error, se_error;
    double quad_thr, mc_thr, se_thr;
  };
  const auto rows = parallel_map<Row>(battery.size(), [&](std::size_t i) {
    const BatteryPoint& pt = battery[i];
    const std::uint64_t seed = run.seed + i;
    const double e = expected_overall_error(pt.r, pt.m, pt.gains, b.params);
    const McEstimate mc_e = mc_expected_overall_error(pt.r, pt.m, pt.gains, b.params, run.mc_samples, seed);
    const McEstimate mc_t = mc_bl_throughput(pt.r, pt.m, pt.gains, b.params, run.mc_samples, seed);
    return Row{e, mc_e.mean, mc_e.std_err, pt.r * (1.0 - e) / 2.0, mc_t.mean, mc_t.std_err};
  });

  Output out;
  out.text = "point,quantity,r[bit/cu],m[symbols],g1,g2,g3,quadrature,monte_carlo,std_err,z,pass\n";
  std::size_t passed = 0;
  std::size_t total = 0;
  auto emit = [&](std::size_t i, const char* what, double q, double mc, double se) {
    const double z = se > 0.0 ? (q - mc) / se : (q == mc ? 0.0 : kNan);
    const bool ok = std::abs(q - mc) <= 3.0 * se || std::abs(q - mc) < 1e-12;
    ++total;
    if (ok) ++passed;
    const auto& pt = battery[i];
    out.text += std::to_string(i) + "," + what + "," + num(pt.r) + "," + std::to_string(pt.m) + "," +
                num(pt.gains.g1) + "," + num(pt.gains.g2) + "," + num(pt.gains.g3) + "," + num(q) + "," +
                num(mc) + "," + num(se) + "," + num(z) + "," + (ok ? "1" : "0") + "\n";
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    emit(i, "overall_error", rows[i].quad_error, rows[i].mc_error, rows[i].se_error);
    emit(i, "bl_throughput", rows[i].quad_thr, rows[i].mc_thr, rows[i].se_thr);
  }
  out.text += summary_line("passed", std::to_string(passed) + "/" + std::to_string(total));
  out.text += summary_line("seed", std::to_string(run.seed));
  out.text += summary_line("mc_samples", std::to_string(run.mc_samples));
  out.exit_code = passed == total ? 0 : 1;
  return out;
}

}  // namespace fblrelay::cli
