#include "fblrelay/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fblrelay/errors.hpp"
#include "fblrelay/fbl_core.hpp"
#include "fblrelay/relay_phy.hpp"

namespace fblrelay {

std::string_view to_string(OptFlag f) {
  switch (f) {
    case OptFlag::converged: return "converged";
    case OptFlag::budget_exhausted: return "budget_exhausted";
    case OptFlag::non_unimodal_detected: return "non_unimodal_detected";
  }
  return "unknown";
}

OptResult maximize_unimodal(const std::function<double(double)>& objective, double lo, double hi,
                            double tol, int max_iterations) {
  if (!(lo < hi)) throw DomainError("maximize_unimodal: need lo < hi");
  if (!(tol > 0.0)) throw DomainError("maximize_unimodal: tolerance must be positive");

  constexpr int n = kCoarseScanPoints;
  std::array<double, n> xs{};
  std::array<double, n> fs{};
  const double step = (hi - lo) / (n - 1);
  int best = 0;
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    xs[i] = i == n - 1 ? hi : lo + step * i;
    fs[i] = objective(xs[i]);
    scale = std::max(scale, std::abs(fs[i]));
    if (fs[i] > fs[best]) best = i;
  }

  // A fall followed later by a rise means at least two rise-fall transitions.
  const double flat = 1e-9 * (1.0 + scale);
  bool fell = false;
  bool multimodal = false;
  for (int i = 0; i + 1 < n; ++i) {
    const double d = fs[i + 1] - fs[i];
    if (d < -flat) fell = true;
    if (d > flat && fell) multimodal = true;
  }
  if (multimodal) {
    return {xs[best], fs[best], 0, step, OptFlag::non_unimodal_detected};
  }

  double a = xs[std::max(best - 1, 0)];
  double b = xs[std::min(best + 1, n - 1)];
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);

  OptResult out{xs[best], fs[best], 0, b - a, OptFlag::converged};
  while (b - a > tol) {
    if (out.iterations >= max_iterations) {
      out.flag = OptFlag::budget_exhausted;
      break;
    }
    ++out.iterations;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  out.bracket = b - a;
  const double x = fc >= fd ? c : d;
  const double fx = std::max(fc, fd);
  if (fx > out.value) {
    out.argmax = x;
    out.value = fx;
  }
  return out;
}

OptResult maximize_rate_perfect_csi(const FadingDraw& draw, Blocklength m, const LinkGains& gains,
                                    const SystemParams& params, double tol) {
  const double weakest = std::min(draw.z2 * gains.g2, draw.z1 * gains.g1 + draw.z3 * gains.g3);
  const double upper = 1.5 * shannon_c(weakest, params);
  if (!(upper > 0.0)) return {0.0, 0.0, 0, 0.0, OptFlag::converged};
  auto throughput = [&](double r) {
    return r * (1.0 - overall_error_instant(draw, r, m, gains, params)) / 2.0;
  };
  return maximize_unimodal(throughput, 0.0, upper, tol);
}

}  // namespace fblrelay
