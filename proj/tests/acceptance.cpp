// Acceptance suite: one PASS/FAIL line per criterion, with the numbers behind it.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fblrelay/baselines.hpp"
#include "fblrelay/cli.hpp"
#include "fblrelay/fbl_core.hpp"
#include "fblrelay/link_layer.hpp"
#include "fblrelay/montecarlo.hpp"
#include "fblrelay/optimize.hpp"
#include "fblrelay/relay_phy.hpp"
#include "fblrelay/scenario.hpp"

#ifndef FBLRELAY_CLI_PATH
#error "FBLRELAY_CLI_PATH must point at the fblrelay executable"
#endif

using namespace fblrelay;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const BuiltScenario& reference() {
  static const BuiltScenario b = build(Scenario{});
  return b;
}

std::vector<double> eta_grid() { return cli::linspace(cli::kEtaLo, kFadingMedian, 100); }

struct RelayPoint {
  double r, e, c_bl, msdr;
};

RelayPoint relay_at(const SystemParams& p) {
  const auto& b = reference();
  const SchemeResult s = evaluate_relay_avg_csi(b.gains, p);
  return {s.coding_rate, s.expected_error, s.bl_throughput, msdr(s.coding_rate, p.m, s.expected_error, b.qos).value};
}

SystemParams with_eta(double eta) {
  SystemParams p = reference().params;
  p.eta = eta;
  return p;
}

// Undivided centered second differences, f(x+h) - 2 f(x) + f(x-h).
double max_second_difference(const std::function<double(double)>& f, double hi, int points, double h,
                             double* where) {
  double worst = -1e300;
  for (int i = 1; i <= points; ++i) {
    const double x = hi * i / points;
    const double lo = std::max(x - h, 0.0);
    const double d2 = f(x + h) - 2.0 * f(x) + f(lo);
    if (d2 > worst) {
      worst = d2;
      *where = x;
    }
  }
  return worst;
}

// Counts rise->fall and fall->rise transitions; steps within tol keep the current trend.
std::pair<int, int> transitions(const std::vector<double>& v, double tol) {
  int rise_fall = 0, fall_rise = 0, trend = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double d = v[i] - v[i - 1];
    const int s = d > tol ? 1 : (d < -tol ? -1 : 0);
    if (s == 0) continue;
    if (trend == 1 && s == -1) ++rise_fall;
    if (trend == -1 && s == 1) ++fall_rise;
    trend = s;
  }
  return {rise_fall, fall_rise};
}

std::string run_command(const std::string& args) {
  const std::string cmd = std::string(FBLRELAY_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  out += "\nstatus=" + std::to_string(status);
  return out;
}

Verdict oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& b = reference();
  const auto battery = cli::make_battery(42, 20, b.params);
  int ok = 0;
  double worst_z = 0.0;
  for (std::size_t i = 0; i < battery.size(); ++i) {
    const auto& pt = battery[i];
    const double q = expected_overall_error(pt.r, pt.m, pt.gains, b.params);
    const McEstimate mc = mc_expected_overall_error(pt.r, pt.m, pt.gains, b.params, 10'000'000, 1000 + i);
    const double z = std::abs(q - mc.mean) / mc.std_err;
    worst_z = std::max(worst_z, z);
    if (z <= 3.0) ++ok;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {ok == 20 && secs < 300.0,
          fmt("%d/20 points within 3 SE at 1e7 draws, max |z| = %.2f, %.1f s", ok, worst_z, secs)};
}

Verdict concavity_in_rate() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& b = reference();
  const double r_max = select_rate_avg_csi(b.gains, with_eta(kFadingMedian)).rate;
  const Blocklength m = b.params.m;
  auto c_bl = [&](double r) { return bl_throughput_relay(r, m, b.gains, b.params); };
  auto ms = [&](double r) {
    return msdr(r, m, expected_overall_error(r, m, b.gains, b.params), b.qos).value;
  };
  double at_c = 0.0, at_m = 0.0;
  const double d2c = max_second_difference(c_bl, r_max, 50, 1e-3, &at_c);
  const double d2m = max_second_difference(ms, r_max, 50, 1e-3, &at_m);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {d2c <= 1e-6 && d2m <= 1e-6 && secs < 60.0,
          fmt("r in (0, %.4f]: max d2 C_BL = %.3g at r=%.4f, max d2 MSDR = %.3g at r=%.4f, %.1f s", r_max, d2c,
              at_c, d2m, at_m, secs)};
}

Verdict quasi_concavity_in_eta() {
  std::vector<double> c, m;
  for (double eta : eta_grid()) {
    const RelayPoint p = relay_at(with_eta(eta));
    c.push_back(p.c_bl);
    m.push_back(p.msdr);
  }
  const auto [c_rf, c_fr] = transitions(c, 1e-9);
  const auto [m_rf, m_fr] = transitions(m, 1e-9);
  return {c_rf == 1 && c_fr == 0 && m_rf == 1 && m_fr == 0,
          fmt("C_BL: %d rise-fall, %d fall-rise; MSDR: %d rise-fall, %d fall-rise", c_rf, c_fr, m_rf, m_fr)};
}

Verdict optimal_eta() {
  const auto c = cli::optimize_eta(Scenario{}, cli::Objective::bl_throughput);
  const auto m = cli::optimize_eta(Scenario{}, cli::Objective::msdr);
  return {c.eta >= 0.1 && c.eta <= 0.3 && c.flag == "converged",
          fmt("eta*(C_BL) = %.4f (%s), eta*(MSDR) = %.4f; target [0.1, 0.3]", c.eta, c.flag.c_str(), m.eta)};
}

Verdict appendix_identity() {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int checked = 0;
  while (checked < 1000) {
    const double r = 4.0 * u(rng);
    const double e = u(rng);
    const Blocklength m = 100 + static_cast<Blocklength>(1900 * u(rng));
    const QoSPair q{2.0 * m + 1e5 * u(rng), 1e-8 + (1.0 - 2e-8) * u(rng)};
    if (!msdr(r, m, e, q).feasible()) continue;
    worst = std::max(worst, msdr_decomposition_check(r, m, e, q));
    ++checked;
  }
  bool phi_zero = true, eps_zero = true;
  for (int i = 0; i < 1000; ++i) {
    const double r = 4.0 * u(rng);
    const double e = u(rng);
    phi_zero = phi_zero && msdr_with_phi(r, e, 0.0).value == r * (1.0 - e) / 2.0;
    const QoSPair q{1e4, 1e-6 + 0.5 * u(rng)};
    eps_zero = eps_zero && msdr(r, 500, 0.0, q).value == r / 2.0;
  }
  return {worst < 1e-12 && phi_zero && eps_zero,
          fmt("max residual %.3g over 1000 triples; phi=0 exact: %s; eps=0 exact: %s", worst,
              phi_zero ? "yes" : "no", eps_zero ? "yes" : "no")};
}

Verdict large_m_convergence() {
  const auto& b = reference();
  const double r = select_rate_avg_csi(b.gains, b.params).rate;
  const double out = outage_prob_relay(r, b.gains, b.params);
  std::string gaps;
  double prev = 1.0;
  bool monotone = true;
  for (Blocklength m : {1'000ULL, 10'000ULL, 1'000'000ULL, 100'000'000ULL}) {
    const double gap = std::abs(expected_overall_error(r, m, b.gains, b.params) - out);
    monotone = monotone && gap < prev;
    prev = gap;
    gaps += fmt(" %.3g", gap);
  }
  return {monotone && prev < 1e-4, fmt("r=%.4f, |E - P_out| at m=1e3,1e4,1e6,1e8:%s", r, gaps.c_str())};
}

Verdict scheme_orderings() {
  const auto& b = reference();
  const Blocklength m = b.params.m;
  int thr_ok = 0, msdr_ok = 0, gap_ok = 0;
  double worst_gap = -1.0, worst_gap_eta = 0.0, min_thr_margin = 1e300;
  int both_zero = 0;
  for (double eta : eta_grid()) {
    const SystemParams p = with_eta(eta);
    const RelayPoint rel = relay_at(p);
    const SchemeResult dir = bl_throughput_direct(2 * m, b.gains, p, MatchedRate{rel.r});
    const double dir_msdr = msdr_direct(dir.coding_rate, 2 * m, dir.expected_error, b.qos).value;
    if (rel.c_bl > dir.bl_throughput) ++thr_ok;
    min_thr_margin = std::min(min_thr_margin, rel.c_bl - dir.bl_throughput);
    if (rel.msdr > dir_msdr) ++msdr_ok;
    if (rel.msdr == 0.0 && dir_msdr == 0.0) ++both_zero;
    const double out = outage_capacity_relay(eta, b.gains, p).outage_capacity;
    const double gap = std::abs(out - rel.c_bl) / out;
    if (gap < 0.02) ++gap_ok;
    if (gap > worst_gap) {
      worst_gap = gap;
      worst_gap_eta = eta;
    }
  }

  const auto best = cli::optimize_eta(Scenario{}, cli::Objective::bl_throughput);
  const PerfectCsiResult perfect = bl_throughput_perfect_csi(m, b.gains, b.params, 1'000'000, 42);
  const bool perfect_ok = perfect.throughput.mean >= best.value;
  const double out_at_best = outage_capacity_relay(best.eta, b.gains, with_eta(best.eta)).outage_capacity;

  return {thr_ok == 100 && msdr_ok == 100 && perfect_ok && gap_ok == 100,
          fmt("C_BL relay>direct %d/100 (min margin %.2g); MSDR relay>direct %d/100 (%d points both 0); "
              "perfect %.4f vs avg %.4f at eta*=%.3f; outage gap <2%% at %d/100 (max %.1f%% at eta=%.3f, "
              "%.2f%% at eta*)",
              thr_ok, min_thr_margin, msdr_ok, both_zero, perfect.throughput.mean, best.value, best.eta, gap_ok,
              100.0 * worst_gap, worst_gap_eta, 100.0 * (out_at_best - best.value) / out_at_best)};
}

Verdict blocklength_trends() {
  const auto& b = reference();
  std::string c_text, m_text;
  bool c_ok = true, m_ok = true;
  double prev = -1.0;
  for (Blocklength m : {100ULL, 200ULL, 500ULL, 1000ULL, 2000ULL}) {
    SystemParams p = b.params;
    p.m = m;
    const double c = relay_at(p).c_bl;
    c_ok = c_ok && c >= prev;
    prev = c;
    c_text += fmt(" %.4f", c);
  }
  prev = 1e300;
  for (Blocklength m : {500ULL, 1000ULL, 2000ULL}) {
    SystemParams p = b.params;
    p.m = m;
    const double v = relay_at(p).msdr;
    m_ok = m_ok && v < prev;
    prev = v;
    m_text += fmt(" %.4f", v);
  }
  SystemParams p = b.params;
  p.m = 5001;
  const RelayPoint over = relay_at(p);
  const MsdrStatus status = msdr(over.r, p.m, over.e, b.qos).status;
  const bool zero_ok = over.msdr == 0.0 && status == MsdrStatus::period_exceeds_delay;
  return {c_ok && m_ok && zero_ok,
          fmt("C_BL(m=100..2000):%s; MSDR(m=500,1000,2000):%s; MSDR(m=5001) = %g", c_text.c_str(), m_text.c_str(),
              over.msdr)};
}

Verdict special_functions() {
  SystemParams p;
  p.p_tx = 1.0;
  p.sigma2 = 1.0;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_rt = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double g = std::pow(10.0, -2.0 + 5.0 * u(rng));
    const double e = std::pow(10.0, -8.0 + (8.0 + std::log10(0.5)) * u(rng));
    const Blocklength m = 100 + static_cast<Blocklength>(4900 * u(rng));
    const RateResult r = achievable_rate(g, e, m, p);
    if (r.clamped) continue;
    worst_rt = std::max(worst_rt, std::abs(block_error(g, r.rate, m, p) - e) / e);
  }
  double worst_q = 0.0, worst_x = 0.0, first_bad = 0.0;
  bool seen_bad = false;
  for (int i = 0; i <= 12000; ++i) {
    const double x = -6.0 + i * 1e-3;
    const double err = std::abs(q_inv(q_func(x)) - x);
    if (err > worst_q) {
      worst_q = err;
      worst_x = x;
    }
    if (err > 1e-10 && !seen_bad) {
      seen_bad = true;
      first_bad = x;
    }
  }
  double last_bad = first_bad;
  for (int i = 0; i <= 12000; ++i) {
    const double x = -6.0 + i * 1e-3;
    if (std::abs(q_inv(q_func(x)) - x) > 1e-10) last_bad = x;
  }
  std::string where = seen_bad ? fmt(" (exceeds 1e-10 for x in [%.3f, %.3f])", first_bad, last_bad) : "";
  return {worst_rt < 1e-9 && worst_q <= 1e-10,
          fmt("round trip max rel err %.3g; q_inv(q_func(x)) max err %.3g at x=%.3f%s", worst_rt, worst_q, worst_x,
              where.c_str())};
}

Verdict determinism() {
  const std::vector<std::string> commands{
      "validate",
      "sweep --variable eta --n 25 --schemes relay_avg,relay_perfect,direct_matched,direct_weighted,"
      "shannon_ergodic,outage --metrics bl_throughput,msdr,expected_error,coding_rate",
      "sweep --variable blocklength --grid 100,200,500,1000,2000 --schemes relay_avg,relay_perfect,"
      "direct_matched,outage --metrics bl_throughput,msdr,expected_error,coding_rate --mc-samples 1e5",
      "sweep --variable coding_rate --lo 0.05 --hi 1.9 --n 40 --schemes relay_avg,direct_matched,"
      "direct_weighted,outage --metrics bl_throughput,msdr,expected_error,coding_rate",
  };
  int same = 0;
  for (const auto& c : commands) {
    const std::string a = run_command(c);
    const std::string b = run_command(c);
    if (a == b && a.find("status=0") != std::string::npos && a.size() > 100) ++same;
  }
  return {same == static_cast<int>(commands.size()),
          fmt("%d/%zu commands byte-identical across two runs (seed 42)", same, commands.size())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Verdict (*run)();
  };
  const Criterion criteria[] = {
      {"oracle equivalence (quadrature vs 1e7-draw Monte Carlo)", oracle_equivalence},
      {"concavity of C_BL and MSDR in r", concavity_in_rate},
      {"quasi-concavity of C_BL and MSDR in eta", quasi_concavity_in_eta},
      {"optimal eta near 0.2", optimal_eta},
      {"MSDR decomposition identity", appendix_identity},
      {"large-blocklength convergence to outage", large_m_convergence},
      {"scheme orderings", scheme_orderings},
      {"blocklength trends", blocklength_trends},
      {"round trip and special-function accuracy", special_functions},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  int index = 1;
  for (const auto& c : criteria) {
    const Verdict v = c.run();
    if (!v.pass) ++failed;
    std::printf("%s [%d] %s: %s\n", v.pass ? "PASS" : "FAIL", index++, c.name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - 1 - failed, index - 1);
  return failed;
}
