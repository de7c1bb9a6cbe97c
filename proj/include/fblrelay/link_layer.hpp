#pragma once

// Effective-capacity link layer: Bernoulli service increments and the
// maximum sustainable data rate (MSDR) under a {delay, violation} QoS pair.

#include "fblrelay/types.hpp"

namespace fblrelay {

/// Delay budget in symbols and the tolerated probability of exceeding it.
struct QoSPair {
  double d = 1e4;
  double p_d = 1e-2;

  void validate() const;
};

/// Mean and variance (per transmission period) of the service increment
/// s_i ∈ {0, r m}, which is zero with probability eps_bar.
struct ServiceStats {
  double mean = 0.0;
  double variance = 0.0;
  double eps_bar = 0.0;
};

struct QosExponentPoint {
  double theta = 0.0;
  double ec = 0.0;  ///< effective capacity, bits per period
};

enum class MsdrStatus {
  ok,
  qos_unsupportable,      ///< negative discriminant
  period_exceeds_delay,   ///< one transmission period is longer than d
};

struct MsdrResult {
  double value = 0.0;  ///< bits per channel use; 0 unless status == ok
  MsdrStatus status = MsdrStatus::ok;

  bool feasible() const { return status == MsdrStatus::ok; }
};

ServiceStats service_stats(double r, Blocklength m, double eps_bar);

/// Central-limit effective capacity, mean - (theta/2) variance.
double effective_capacity_clt(const ServiceStats& stats, double theta);
QosExponentPoint qos_exponent_point(const ServiceStats& stats, double theta);

/// 4 m ln(P_d) / d for a two-hop period of 2m symbols.
double qos_phi(Blocklength m, const QoSPair& qos);

/// MSDR of the two-hop relay with per-hop rate r and blocklength m:
/// r(1-e)/4 + (r/4) sqrt((1-e)^2 + phi e (1-e)).
MsdrResult msdr(double r, Blocklength m, double eps_bar, const QoSPair& qos);

/// The same closed form for a given phi. phi == 0 (no delay constraint)
/// returns r(1-e)/2 exactly.
MsdrResult msdr_with_phi(double r, double eps_bar, double phi);

/// MSDR from arbitrary service moments of a 2m-symbol period.
MsdrResult msdr_from_stats(const ServiceStats& stats, Blocklength m, const QoSPair& qos);

/// MSDR of single-hop transmission at rate r_dir over periods of m_direct symbols.
MsdrResult msdr_direct(double r_dir, Blocklength m_direct, double eps, const QoSPair& qos);

/// |msdr - (C_BL/2 + R*)|, R* = (r/4) sqrt(1 + (phi-2) e + (1-phi) e^2).
/// Throws DomainError for infeasible inputs.
double msdr_decomposition_check(double r, Blocklength m, double eps_bar, const QoSPair& qos);
double msdr_decomposition_residual(double r, double eps_bar, double phi);

}  // namespace fblrelay
