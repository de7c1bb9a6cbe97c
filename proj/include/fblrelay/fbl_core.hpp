#pragma once

// Normal approximation of the finite-blocklength coding rate over a
// complex AWGN channel. All rates are in bits per channel use.

#include "fblrelay/types.hpp"

namespace fblrelay {

/// Gaussian tail probability Q(w) = P(N(0,1) > w).
double q_func(double w);

/// Inverse of q_func. Throws DomainError unless 0 < eps < 1.
double q_inv(double eps);

/// log2(1 + gamma), accurate for small gamma.
double capacity(Snr snr);

/// log2(1 + gain * p_tx / sigma2).
double shannon_c(double gain, const SystemParams& params);

/// (1 - (1+gamma)^-2) (log2 e)^2.
double dispersion_complex(Snr snr);

/// (gamma/2)(gamma+2)/(1+gamma)^2 (log2 e)^2, exactly half of dispersion_complex.
double dispersion_real(Snr snr);

struct RateResult {
  double rate = 0.0;
  bool clamped = false;  ///< the normal approximation went negative and was clamped to 0
};

/// C(gain) - sqrt(V/m) Q^-1(eps). Throws DomainError unless 0 < eps < 1 and m >= 1.
RateResult achievable_rate(double gain, double eps, Blocklength m, const SystemParams& params);

/// Q((C(gain) - r) / sqrt(V/m)). At zero dispersion: 1 for r > 0, 0.5 for r == 0.
double block_error(double gain, double r, Blocklength m, const SystemParams& params);

}  // namespace fblrelay
