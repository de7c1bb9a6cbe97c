#include "fblrelay/montecarlo.hpp"

#include <cmath>

#include "fblrelay/errors.hpp"
#include "fblrelay/fbl_core.hpp"
#include "fblrelay/relay_phy.hpp"

namespace fblrelay {

namespace {

void require_samples(std::uint64_t n, const char* who) {
  if (n < 1) throw DomainError(std::string(who) + ": need at least one sample");
}

// Decode outcome of one period, simulated in two stages: the relay decodes
// the broadcast, then the destination decodes the combined signal.
bool period_decoded(StreamRng& rng, double r, Blocklength m, const LinkGains& gains,
                    const SystemParams& params) {
  const FadingDraw z = draw_fading(rng);
  const double u_relay = rng.uniform();
  const double u_dest = rng.uniform();
  if (u_relay < block_error(z.z2 * gains.g2, r, m, params)) return false;
  return u_dest >= block_error(z.z1 * gains.g1 + z.z3 * gains.g3, r, m, params);
}

}  // namespace

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

FadingDraw draw_fading(StreamRng& rng) {
  const double z1 = -std::log(rng.uniform());
  const double z2 = -std::log(rng.uniform());
  const double z3 = -std::log(rng.uniform());
  return {z1, z2, z3};
}

McEstimate to_estimate(const Welford& acc, std::uint64_t seed) {
  const auto n = acc.count();
  return {acc.mean(), n > 0 ? std::sqrt(acc.variance() / static_cast<double>(n)) : 0.0, n, seed};
}

McEstimate mc_expected_error_single(double mean_gain, double r, Blocklength m,
                                    const SystemParams& params, std::uint64_t n,
                                    std::uint64_t seed) {
  require_samples(n, "mc_expected_error_single");
  auto sample = [&](StreamRng& rng) {
    return block_error(-std::log(rng.uniform()) * mean_gain, r, m, params);
  };
  return to_estimate(run_blocks(n, seed, sample), seed);
}

McEstimate mc_expected_error_mrc(double r, Blocklength m, const LinkGains& gains,
                                 const SystemParams& params, std::uint64_t n, std::uint64_t seed) {
  require_samples(n, "mc_expected_error_mrc");
  auto sample = [&](StreamRng& rng) {
    const FadingDraw z = draw_fading(rng);
    return block_error(z.z1 * gains.g1 + z.z3 * gains.g3, r, m, params);
  };
  return to_estimate(run_blocks(n, seed, sample), seed);
}

McEstimate mc_expected_overall_error(double r, Blocklength m, const LinkGains& gains,
                                     const SystemParams& params, std::uint64_t n,
                                     std::uint64_t seed) {
  require_samples(n, "mc_expected_overall_error");
  auto sample = [&](StreamRng& rng) {
    return overall_error_instant(draw_fading(rng), r, m, gains, params);
  };
  return to_estimate(run_blocks(n, seed, sample), seed);
}

McEstimate mc_bl_throughput(double r, Blocklength m, const LinkGains& gains,
                            const SystemParams& params, std::uint64_t n, std::uint64_t seed) {
  require_samples(n, "mc_bl_throughput");
  const double payload = r / 2.0;
  auto sample = [&](StreamRng& rng) {
    return period_decoded(rng, r, m, gains, params) ? payload : 0.0;
  };
  return to_estimate(run_blocks(n, seed, sample), seed);
}

McServiceStats mc_service_stats(double r, Blocklength m, const LinkGains& gains,
                                const SystemParams& params, std::uint64_t n, std::uint64_t seed) {
  require_samples(n, "mc_service_stats");
  const double payload = r * static_cast<double>(m);
  auto sample = [&](StreamRng& rng) {
    return period_decoded(rng, r, m, gains, params) ? payload : 0.0;
  };
  const Welford acc = run_blocks(n, seed, sample);

  McServiceStats out;
  out.mean = to_estimate(acc, seed);
  out.variance = acc.variance();
  const double p = payload > 0.0 ? acc.mean() / payload : 1.0;
  out.eps_bar = 1.0 - p;
  // Var[s] = c^2 p (1-p); delta method on p-hat.
  out.variance_std_err = payload * payload * std::abs(1.0 - 2.0 * p) *
                         std::sqrt(p * (1.0 - p) / static_cast<double>(acc.count()));
  return out;
}

}  // namespace fblrelay
