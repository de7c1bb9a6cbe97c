#include "fblrelay/fbl_core.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fblrelay/errors.hpp"

namespace fblrelay {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Lower-tail quantile of N(0,1), rational approximation (P. J. Acklam),
// relative error about 1.2e-9. Refined by the caller.
double normal_quantile_seed(double p) {
  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                           -2.759285104469687e+02, 1.383577518672690e+02,
                                           -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                           -1.556989798598866e+02, 6.680131188771972e+01,
                                           -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                           -2.400758277161838e+00, -2.549732539343734e+00,
                                           4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// gamma (gamma + 2) / (1 + gamma)^2 without overflow or cancellation.
double dispersion_shape(double gamma) {
  const double s = 1.0 + gamma;
  return (gamma / s) * ((gamma + 2.0) / s);
}

}  // namespace

double q_func(double w) { return 0.5 * std::erfc(w * kInvSqrt2); }

double q_inv(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw DomainError("q_inv: eps must lie in (0, 1), got " + std::to_string(eps));
  }
  if (eps == 0.5) return 0.0;

  // Q^-1(eps) = -Phi^-1(eps). Halley steps on the erfc residual; two steps
  // reach full double precision from the 1e-9 seed.
  double x = -normal_quantile_seed(eps);
  for (int it = 0; it < 2; ++it) {
    const double e = q_func(x) - eps;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    // Q'(x) = -phi(x), Q''(x) = x phi(x)
    x = x + u / (1.0 - 0.5 * x * u);
  }
  return x;
}

double capacity(Snr snr) { return std::log1p(snr.gamma) * kLog2e; }

double shannon_c(double gain, const SystemParams& params) { return capacity(params.snr(gain)); }

double dispersion_complex(Snr snr) { return dispersion_shape(snr.gamma) * (kLog2e * kLog2e); }

double dispersion_real(Snr snr) { return 0.5 * dispersion_complex(snr); }

RateResult achievable_rate(double gain, double eps, Blocklength m, const SystemParams& params) {
  if (m < 1) throw DomainError("achievable_rate: blocklength must be >= 1");
  const Snr snr = params.snr(gain);
  const double penalty =
      std::sqrt(dispersion_complex(snr) / static_cast<double>(m)) * q_inv(eps);
  const double rate = capacity(snr) - penalty;
  if (rate < 0.0) return {0.0, true};
  return {rate, false};
}

double block_error(double gain, double r, Blocklength m, const SystemParams& params) {
  const Snr snr = params.snr(gain);
  const double v = dispersion_complex(snr);
  if (v <= 0.0) return r > 0.0 ? 1.0 : 0.5;
  return q_func((capacity(snr) - r) / std::sqrt(v / static_cast<double>(m)));
}

}  // namespace fblrelay
