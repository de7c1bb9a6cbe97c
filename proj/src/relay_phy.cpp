#include "fblrelay/relay_phy.hpp"

#include <cmath>
#include <string>

#include "fblrelay/errors.hpp"
#include "fblrelay/fading.hpp"
#include "fblrelay/optimize.hpp"

namespace fblrelay {

void SystemParams::validate() const {
  if (m < 100) throw ValidationError("m", "blocklength must be at least 100, got " + std::to_string(m));
  if (!(p_tx > 0.0) || !std::isfinite(p_tx)) throw ValidationError("p_tx", "must be positive");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ValidationError("sigma2", "must be positive");
  if (!(eps_nominal > 0.0 && eps_nominal < 1.0)) {
    throw ValidationError("eps_nominal", "must lie in (0, 1)");
  }
  if (!(eta > 0.0 && eta <= kFadingMedian)) {
    throw ValidationError("eta", "must lie in (0, ln 2], got " + std::to_string(eta));
  }
}

void LinkGains::validate() const {
  const double g[] = {g1, g2, g3};
  const char* names[] = {"g1", "g2", "g3"};
  for (int i = 0; i < 3; ++i) {
    if (!(g[i] > 0.0) || !std::isfinite(g[i])) throw ValidationError(names[i], "gain must be positive");
  }
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::relay_avg_csi: return "relay_avg_csi";
    case Scheme::relay_perfect_csi: return "relay_perfect_csi";
    case Scheme::direct_avg_csi: return "direct_avg_csi";
    case Scheme::direct_matched: return "direct_matched";
  }
  return "unknown";
}

RateResult select_rate_avg_csi(const LinkGains& gains, const SystemParams& params) {
  const double gain = params.eta * gains.bottleneck();
  if (!(gain > 0.0)) throw DomainError("select_rate_avg_csi: bottleneck gain must be positive");
  return achievable_rate(gain, params.eps_nominal, params.m, params);
}

double compose_overall_error(double eps2, double eps_mrc) { return eps2 + (1.0 - eps2) * eps_mrc; }

double overall_error_instant(const FadingDraw& draw, double r, Blocklength m,
                             const LinkGains& gains, const SystemParams& params) {
  const double eps2 = block_error(draw.z2 * gains.g2, r, m, params);
  const double eps_mrc = block_error(draw.z1 * gains.g1 + draw.z3 * gains.g3, r, m, params);
  return compose_overall_error(eps2, eps_mrc);
}

double expected_overall_error(double r, Blocklength m, const LinkGains& gains,
                              const SystemParams& params, const quad::Options& opt) {
  const double eps2 = expected_error_backhaul(r, m, gains, params, opt);
  const double eps_mrc = expected_error_mrc(r, m, gains, params, opt);
  return compose_overall_error(eps2, eps_mrc);
}

double bl_throughput_relay(double r, Blocklength m, const LinkGains& gains,
                           const SystemParams& params, const quad::Options& opt) {
  return r * (1.0 - expected_overall_error(r, m, gains, params, opt)) / 2.0;
}

SchemeResult evaluate_relay_avg_csi(const LinkGains& gains, const SystemParams& params) {
  const RateResult rate = select_rate_avg_csi(gains, params);
  SchemeResult out;
  out.scheme = Scheme::relay_avg_csi;
  out.coding_rate = rate.rate;
  out.rate_clamped = rate.clamped;
  out.expected_error = expected_overall_error(rate.rate, params.m, gains, params);
  out.bl_throughput = rate.rate * (1.0 - out.expected_error) / 2.0;
  return out;
}

SchemeResult bl_throughput_direct(Blocklength m_direct, const LinkGains& gains,
                                  const SystemParams& params, const DirectMode& mode) {
  SchemeResult out;
  if (const auto* matched = std::get_if<MatchedRate>(&mode)) {
    out.scheme = Scheme::direct_matched;
    out.coding_rate = matched->r_relay / 2.0;
  } else {
    const RateResult rate = achievable_rate(params.eta * gains.g1, params.eps_nominal, m_direct, params);
    out.scheme = Scheme::direct_avg_csi;
    out.coding_rate = rate.rate;
    out.rate_clamped = rate.clamped;
  }
  out.expected_error = expected_error_single(gains.g1, out.coding_rate, m_direct, params);
  out.bl_throughput = out.coding_rate * (1.0 - out.expected_error);
  return out;
}

namespace {

struct PerfectCsiAcc {
  Welford throughput;
  Welford rate;
  Welford error;
  std::uint64_t failures = 0;

  void merge(const PerfectCsiAcc& o) {
    throughput.merge(o.throughput);
    rate.merge(o.rate);
    error.merge(o.error);
    failures += o.failures;
  }
};

}  // namespace

PerfectCsiResult bl_throughput_perfect_csi(Blocklength m, const LinkGains& gains,
                                           const SystemParams& params, std::uint64_t n_samples,
                                           std::uint64_t seed) {
  if (n_samples < 100'000) throw DomainError("bl_throughput_perfect_csi: need at least 1e5 samples");

  auto step = [&](StreamRng& rng, PerfectCsiAcc& acc) {
    const FadingDraw draw = draw_fading(rng);
    const OptResult best = maximize_rate_perfect_csi(draw, m, gains, params);
    if (best.flag != OptFlag::converged) ++acc.failures;
    acc.throughput.add(best.value);
    acc.rate.add(best.argmax);
    acc.error.add(best.argmax > 0.0 ? overall_error_instant(draw, best.argmax, m, gains, params)
                                    : 0.0);
  };
  const auto acc = run_blocks_with<PerfectCsiAcc>(n_samples, seed, step);

  PerfectCsiResult out;
  out.throughput = to_estimate(acc.throughput, seed);
  out.rate = to_estimate(acc.rate, seed);
  out.error = to_estimate(acc.error, seed);
  out.optimizer_failures = acc.failures;
  return out;
}

}  // namespace fblrelay
