#pragma once

#include <cstdint>
#include <numbers>

namespace fblrelay {

/// Channel uses per coded block.
using Blocklength = std::uint64_t;

inline constexpr double kLog2e = std::numbers::log2e;

/// Median of the unit-mean exponential fading gain, ln 2. Upper limit of the weight factor.
inline constexpr double kFadingMedian = std::numbers::ln2;

/// Linear signal-to-noise ratio.
struct Snr {
  double gamma = 0.0;
};

/// Radio and coding parameters shared by every scheme.
struct SystemParams {
  Blocklength m = 500;       ///< per-hop blocklength
  double p_tx = 1.0;         ///< transmit power, W
  double sigma2 = 1e-12;     ///< noise power, W
  double eps_nominal = 1e-3; ///< target error used for rate selection
  double eta = 0.2;          ///< weight applied to the average CSI, in (0, ln 2]

  /// Throws ValidationError naming the first bad field.
  void validate() const;

  Snr snr(double gain) const { return Snr{gain * p_tx / sigma2}; }
};

/// Average power gains of the direct (1), backhaul (2) and relaying (3) links.
struct LinkGains {
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;

  void validate() const;

  /// Gain the source sizes its packets for: the weaker of backhaul and combined link.
  double bottleneck() const { return g2 < g1 + g3 ? g2 : g1 + g3; }
};

/// One realization of the unit-mean exponential fading gains.
struct FadingDraw {
  double z1 = 1.0;
  double z2 = 1.0;
  double z3 = 1.0;
};

}  // namespace fblrelay
