#pragma once

// Rayleigh block fading: unit-mean exponential power gains and the
// fading-averaged block-error probabilities of the backhaul link and of the
// MRC-combined destination link.

#include "fblrelay/quadrature.hpp"
#include "fblrelay/types.hpp"

namespace fblrelay {

/// Density of the unit-mean exponential, e^-z. Throws DomainError for z < 0.
double exp_pdf(double z);

/// Channel gain at which C(gain) equals r: (2^r - 1) sigma2 / p_tx.
double threshold_gain(double r, const SystemParams& params);

/// Normalized margin w such that Q(sqrt(m) w) == block_error(gain, r, m).
/// Returns ±inf (or 0 for r == 0) at zero gain, matching the zero-gain limit of block_error.
double normalized_margin(double gain, double r, const SystemParams& params);

/// w(z2) of the backhaul link.
double integrand_arg_backhaul(double z2, double r, Blocklength m, const LinkGains& gains,
                              const SystemParams& params);

/// w(z1, z3) of the MRC-combined link with gain z1 g1 + z3 g3.
double integrand_arg_mrc(double z1, double z3, double r, Blocklength m, const LinkGains& gains,
                         const SystemParams& params);

/// E_z[block_error(z * mean_gain, r, m)] for one Rayleigh link.
double expected_error_single(double mean_gain, double r, Blocklength m,
                             const SystemParams& params, const quad::Options& opt = {});

/// E_{za,zb}[block_error(za ga + zb gb, r, m)] for two independent Rayleigh branches.
double expected_error_combined(double ga, double gb, double r, Blocklength m,
                               const SystemParams& params, const quad::Options& opt = {});

/// Average backhaul error, E_{z2}[eps_2].
double expected_error_backhaul(double r, Blocklength m, const LinkGains& gains,
                               const SystemParams& params, const quad::Options& opt = {});

/// Average error of the MRC-combined link, E_{z1,z3}[eps_MRC].
double expected_error_mrc(double r, Blocklength m, const LinkGains& gains,
                          const SystemParams& params, const quad::Options& opt = {});

/// P(za ga + zb gb <= t): hypoexponential CDF, Erlang-2 when the means coincide.
double sum_exp_cdf(double t, double ga, double gb);

}  // namespace fblrelay
