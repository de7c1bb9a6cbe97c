#include "fblrelay/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "fblrelay/errors.hpp"
#include "fblrelay/fading.hpp"
#include "fblrelay/fbl_core.hpp"

namespace fblrelay {

double outage_prob_single(double r, double mean_gain, const SystemParams& params) {
  const double t = threshold_gain(r, params);
  if (t <= 0.0) return 0.0;
  if (mean_gain <= 0.0) return 1.0;
  return -std::expm1(-t / mean_gain);
}

double outage_prob_relay(double r, const LinkGains& gains, const SystemParams& params) {
  const double p2 = outage_prob_single(r, gains.g2, params);
  const double p_mrc = sum_exp_cdf(threshold_gain(r, params), gains.g1, gains.g3);
  return p2 + (1.0 - p2) * p_mrc;
}

OutagePoint outage_capacity_relay(double eta, const LinkGains& gains, const SystemParams& params) {
  OutagePoint pt;
  pt.per_hop_rate = shannon_c(eta * gains.bottleneck(), params);
  pt.rate = pt.per_hop_rate / 2.0;
  pt.p_out = outage_prob_relay(pt.per_hop_rate, gains, params);
  pt.outage_capacity = pt.rate * (1.0 - pt.p_out);
  return pt;
}

OutagePoint outage_capacity_direct(double eta, const LinkGains& gains, const SystemParams& params) {
  OutagePoint pt;
  pt.per_hop_rate = shannon_c(eta * gains.g1, params);
  pt.rate = pt.per_hop_rate;
  pt.p_out = outage_prob_single(pt.rate, gains.g1, params);
  pt.outage_capacity = pt.rate * (1.0 - pt.p_out);
  return pt;
}

double ergodic_term(const FadingDraw& draw, const LinkGains& gains, const SystemParams& params) {
  const double backhaul = shannon_c(draw.z2 * gains.g2, params);
  const double combined = shannon_c(draw.z1 * gains.g1 + draw.z3 * gains.g3, params);
  return 0.5 * std::min(backhaul, combined);
}

McEstimate ergodic_capacity_relay(const LinkGains& gains, const SystemParams& params,
                                  std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1'000'000) throw DomainError("ergodic_capacity_relay: need at least 1e6 samples");
  auto sample = [&](StreamRng& rng) { return ergodic_term(draw_fading(rng), gains, params); };
  return to_estimate(run_blocks(n_samples, seed, sample), seed);
}

}  // namespace fblrelay
