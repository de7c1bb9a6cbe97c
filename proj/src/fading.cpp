#include "fblrelay/fading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "fblrelay/errors.hpp"
#include "fblrelay/fbl_core.hpp"

namespace fblrelay {

namespace {

// Gain-domain width of the error step around the threshold gain: the Q-function
// argument moves by one unit over this width. Floored at the gain whose SNR is
// 1/m, which is where the r = 0 error curve leaves 1/2.
double step_width_gain(double r, Blocklength m, const SystemParams& params) {
  const double t = threshold_gain(r, params);
  const Snr snr = params.snr(t);
  const double slope = (params.p_tx / params.sigma2) * kLog2e / (1.0 + snr.gamma);
  const double width = std::sqrt(dispersion_complex(snr) / static_cast<double>(m)) / slope;
  return std::max(width, params.sigma2 / (params.p_tx * static_cast<double>(m)));
}

}  // namespace

double exp_pdf(double z) {
  if (z < 0.0) throw DomainError("exp_pdf: fading gain must be non-negative");
  return std::exp(-z);
}

double threshold_gain(double r, const SystemParams& params) {
  return std::expm1(r * std::numbers::ln2) * params.sigma2 / params.p_tx;
}

double normalized_margin(double gain, double r, const SystemParams& params) {
  const Snr snr = params.snr(gain);
  const double root = std::sqrt(dispersion_complex(snr));
  if (root <= 0.0) return r > 0.0 ? -std::numeric_limits<double>::infinity() : 0.0;
  return (capacity(snr) - r) / root;
}

double integrand_arg_backhaul(double z2, double r, Blocklength /*m*/, const LinkGains& gains,
                              const SystemParams& params) {
  return normalized_margin(z2 * gains.g2, r, params);
}

double integrand_arg_mrc(double z1, double z3, double r, Blocklength /*m*/,
                         const LinkGains& gains, const SystemParams& params) {
  return normalized_margin(z1 * gains.g1 + z3 * gains.g3, r, params);
}

double expected_error_single(double mean_gain, double r, Blocklength m,
                             const SystemParams& params, const quad::Options& opt) {
  if (mean_gain <= 0.0) return block_error(0.0, r, m, params);
  const double t = threshold_gain(r, params);
  const double width = step_width_gain(r, m, params);
  auto eps = [&](double z) { return block_error(z * mean_gain, r, m, params); };
  return quad::expect_exponential(eps, quad::Transition{t / mean_gain, width / mean_gain}, opt);
}

double expected_error_combined(double ga, double gb, double r, Blocklength m,
                               const SystemParams& params, const quad::Options& opt) {
  // Outer integral runs over the stronger branch.
  if (ga < gb) std::swap(ga, gb);
  if (ga <= 0.0) return block_error(0.0, r, m, params);
  if (gb <= 0.0) return expected_error_single(ga, r, m, params, opt);

  const double t = threshold_gain(r, params);
  const double width = step_width_gain(r, m, params);

  quad::Options inner_opt = opt;
  inner_opt.abs_tol = 0.1 * opt.abs_tol;

  auto inner = [&](double za) {
    const double base = za * ga;
    auto eps = [&](double zb) { return block_error(base + zb * gb, r, m, params); };
    return quad::expect_exponential(eps, quad::Transition{(t - base) / gb, width / gb},
                                    inner_opt);
  };
  return quad::expect_exponential(inner, quad::Transition{t / ga, width / ga}, opt);
}

double expected_error_backhaul(double r, Blocklength m, const LinkGains& gains,
                               const SystemParams& params, const quad::Options& opt) {
  return expected_error_single(gains.g2, r, m, params, opt);
}

double expected_error_mrc(double r, Blocklength m, const LinkGains& gains,
                          const SystemParams& params, const quad::Options& opt) {
  return expected_error_combined(gains.g1, gains.g3, r, m, params, opt);
}

double sum_exp_cdf(double t, double ga, double gb) {
  if (t <= 0.0) return 0.0;
  if (ga < gb) std::swap(ga, gb);
  if (ga <= 0.0) return 1.0;
  if (gb <= 0.0) return -std::expm1(-t / ga);

  if (ga - gb <= 1e-9 * ga) {
    const double g = 0.5 * (ga + gb);
    return 1.0 - (1.0 + t / g) * std::exp(-t / g);
  }
  // Survival of the hypoexponential with rates a <= b, written so that it
  // stays accurate as b - a -> 0:
  //   S(t) = e^{-at} (1 + a t (1 - e^{-x}) / x),  x = (b - a) t.
  const double a = 1.0 / ga;
  const double b = 1.0 / gb;
  const double x = (b - a) * t;
  const double phi1 = -std::expm1(-x) / x;
  return 1.0 - std::exp(-a * t) * (1.0 + a * t * phi1);
}

}  // namespace fblrelay
