#pragma once

// Two-hop decode-and-forward relay with MRC at the destination and rate
// selection from weighted average CSI, plus the comparison schemes.

#include <cstdint>
#include <string_view>
#include <variant>

#include "fblrelay/fbl_core.hpp"
#include "fblrelay/montecarlo.hpp"
#include "fblrelay/quadrature.hpp"
#include "fblrelay/types.hpp"

namespace fblrelay {

enum class Scheme { relay_avg_csi, relay_perfect_csi, direct_avg_csi, direct_matched };

std::string_view to_string(Scheme s);

struct SchemeResult {
  double coding_rate = 0.0;    ///< bits per channel use, per hop for relaying
  double expected_error = 0.0;
  double bl_throughput = 0.0;  ///< bits per channel use
  Scheme scheme = Scheme::relay_avg_csi;
  bool rate_clamped = false;
};

/// R(eta * min{g2, g1 + g3}, eps_nominal, m) with eta, eps_nominal, m from params.
RateResult select_rate_avg_csi(const LinkGains& gains, const SystemParams& params);

/// eps_2 + (1 - eps_2) eps_MRC.
double compose_overall_error(double eps2, double eps_mrc);

/// Overall error of one period for a given fading realization.
double overall_error_instant(const FadingDraw& draw, double r, Blocklength m,
                             const LinkGains& gains, const SystemParams& params);

/// E[eps_2] + (1 - E[eps_2]) E[eps_MRC].
double expected_overall_error(double r, Blocklength m, const LinkGains& gains,
                              const SystemParams& params, const quad::Options& opt = {});

/// r (1 - E[eps_R]) / 2.
double bl_throughput_relay(double r, Blocklength m, const LinkGains& gains,
                           const SystemParams& params, const quad::Options& opt = {});

/// Relay with average CSI at params.eta and blocklength params.m.
SchemeResult evaluate_relay_avg_csi(const LinkGains& gains, const SystemParams& params);

/// Direct transmission at the relay's equivalent rate r_relay / 2.
struct MatchedRate {
  double r_relay = 0.0;
};
/// Direct transmission sizing its own rate from eta * g1.
struct WeightedCsi {};
using DirectMode = std::variant<MatchedRate, WeightedCsi>;

/// Single-hop transmission over the direct link with blocklength m_direct
/// (2m in fair comparisons). No halving: one hop per period.
SchemeResult bl_throughput_direct(Blocklength m_direct, const LinkGains& gains,
                                  const SystemParams& params, const DirectMode& mode);

struct PerfectCsiResult {
  McEstimate throughput;  ///< bits per channel use
  McEstimate rate;        ///< per-period optimal per-hop rate
  McEstimate error;       ///< overall error at the per-period optimum
  std::uint64_t optimizer_failures = 0;
};

/// Average over fading of max_r r (1 - eps_R(draw, r)) / 2, rate chosen per
/// period from perfect CSI. Requires n_samples >= 1e5.
PerfectCsiResult bl_throughput_perfect_csi(Blocklength m, const LinkGains& gains,
                                           const SystemParams& params, std::uint64_t n_samples,
                                           std::uint64_t seed);

}  // namespace fblrelay
