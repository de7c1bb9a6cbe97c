#pragma once

#include <functional>
#include <string_view>

#include "fblrelay/types.hpp"

namespace fblrelay {

enum class OptFlag { converged, budget_exhausted, non_unimodal_detected };

std::string_view to_string(OptFlag f);

struct OptResult {
  double argmax = 0.0;
  double value = 0.0;
  int iterations = 0;
  double bracket = 0.0;  ///< width of the final golden-section interval
  OptFlag flag = OptFlag::converged;
};

inline constexpr int kCoarseScanPoints = 33;

/// Maximizes a unimodal objective on [lo, hi]. A 33-point scan seeds the
/// bracket and flags objectives with a fall followed by a rise; golden-section
/// search then narrows the bracket to `tol`.
OptResult maximize_unimodal(const std::function<double(double)>& objective, double lo, double hi,
                            double tol, int max_iterations = 200);

/// Per-period rate maximizing r (1 - eps_R(draw, r)) / 2 over (0, 1.5 C(bottleneck)].
OptResult maximize_rate_perfect_csi(const FadingDraw& draw, Blocklength m, const LinkGains& gains,
                                    const SystemParams& params, double tol = 1e-5);

}  // namespace fblrelay
