#pragma once

// Infinite-blocklength references: outage probability/capacity with the same
// weighted-CSI packet sizing, and the ergodic capacity of relaying.

#include <cstdint>

#include "fblrelay/montecarlo.hpp"
#include "fblrelay/types.hpp"

namespace fblrelay {

struct OutagePoint {
  double rate = 0.0;          ///< equivalent end-to-end rate (r/2 for relaying)
  double per_hop_rate = 0.0;  ///< rate tested against each link's capacity
  double p_out = 0.0;
  double outage_capacity = 0.0;  ///< rate * (1 - p_out)
};

/// P(C(z g) < r) = 1 - exp(-(2^r - 1) sigma2 / (p_tx g)) for one Rayleigh link.
double outage_prob_single(double r, double mean_gain, const SystemParams& params);

/// P_out,2 + (1 - P_out,2) P_out,MRC at per-hop rate r.
double outage_prob_relay(double r, const LinkGains& gains, const SystemParams& params);

/// Rate C(eta min{g2, g1+g3}); capacity (r/2)(1 - P_out(r)).
OutagePoint outage_capacity_relay(double eta, const LinkGains& gains, const SystemParams& params);

/// Rate C(eta g1); capacity r (1 - P_out,1(r)).
OutagePoint outage_capacity_direct(double eta, const LinkGains& gains, const SystemParams& params);

/// (1/2) min{C(z2 g2), C(z1 g1 + z3 g3)} for one realization.
double ergodic_term(const FadingDraw& draw, const LinkGains& gains, const SystemParams& params);

/// Monte Carlo (1/2) E[min{C(z2 g2), C(z1 g1 + z3 g3)}]. Requires n_samples >= 1e6.
McEstimate ergodic_capacity_relay(const LinkGains& gains, const SystemParams& params,
                                  std::uint64_t n_samples, std::uint64_t seed);

}  // namespace fblrelay
