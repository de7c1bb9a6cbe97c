#include "fblrelay/link_layer.hpp"

#include <cmath>

#include "fblrelay/errors.hpp"

namespace fblrelay {

namespace {

// MSDR for a service process with per-period moments (mean, var) over
// periods of `period` symbols:
//   (mean + sqrt(mean^2 + phi var)) / (2 period),  phi = 2 period ln(P_d) / d.
MsdrResult period_msdr(double mean, double var, double period, const QoSPair& qos) {
  qos.validate();
  if (period > qos.d) return {0.0, MsdrStatus::period_exceeds_delay};
  const double phi = 2.0 * period * std::log(qos.p_d) / qos.d;
  const double disc = mean * mean + phi * var;
  if (disc < 0.0) return {0.0, MsdrStatus::qos_unsupportable};
  return {(mean + std::sqrt(disc)) / (2.0 * period), MsdrStatus::ok};
}

}  // namespace

void QoSPair::validate() const {
  if (!(d > 0.0) || !std::isfinite(d)) throw ValidationError("qos.d", "delay budget must be positive");
  if (!(p_d > 0.0 && p_d < 1.0)) throw ValidationError("qos.p_d", "must lie in (0, 1)");
}

ServiceStats service_stats(double r, Blocklength m, double eps_bar) {
  if (!(eps_bar >= 0.0 && eps_bar <= 1.0)) throw DomainError("service_stats: eps_bar must lie in [0, 1]");
  const double payload = r * static_cast<double>(m);
  return {payload * (1.0 - eps_bar), payload * payload * eps_bar * (1.0 - eps_bar), eps_bar};
}

double effective_capacity_clt(const ServiceStats& stats, double theta) {
  if (theta < 0.0) throw DomainError("effective_capacity_clt: theta must be non-negative");
  return stats.mean - 0.5 * theta * stats.variance;
}

QosExponentPoint qos_exponent_point(const ServiceStats& stats, double theta) {
  return {theta, effective_capacity_clt(stats, theta)};
}

double qos_phi(Blocklength m, const QoSPair& qos) {
  return 4.0 * static_cast<double>(m) * std::log(qos.p_d) / qos.d;
}

MsdrResult msdr(double r, Blocklength m, double eps_bar, const QoSPair& qos) {
  qos.validate();
  if (2.0 * static_cast<double>(m) > qos.d) return {0.0, MsdrStatus::period_exceeds_delay};
  return msdr_with_phi(r, eps_bar, qos_phi(m, qos));
}

MsdrResult msdr_with_phi(double r, double eps_bar, double phi) {
  const double ok = 1.0 - eps_bar;
  const double disc = ok * ok + phi * eps_bar * ok;
  if (disc < 0.0) return {0.0, MsdrStatus::qos_unsupportable};
  // Same grouping as r(1-e)/2 so that phi == 0 reproduces C_BL bit for bit.
  return {r * ok / 4.0 + (r / 4.0) * std::sqrt(disc), MsdrStatus::ok};
}

MsdrResult msdr_from_stats(const ServiceStats& stats, Blocklength m, const QoSPair& qos) {
  return period_msdr(stats.mean, stats.variance, 2.0 * static_cast<double>(m), qos);
}

MsdrResult msdr_direct(double r_dir, Blocklength m_direct, double eps, const QoSPair& qos) {
  const ServiceStats s = service_stats(r_dir, m_direct, eps);
  return period_msdr(s.mean, s.variance, static_cast<double>(m_direct), qos);
}

double msdr_decomposition_check(double r, Blocklength m, double eps_bar, const QoSPair& qos) {
  if (!msdr(r, m, eps_bar, qos).feasible()) {
    throw DomainError("msdr_decomposition_check: infeasible QoS for these inputs");
  }
  return msdr_decomposition_residual(r, eps_bar, qos_phi(m, qos));
}

double msdr_decomposition_residual(double r, double eps_bar, double phi) {
  const MsdrResult full = msdr_with_phi(r, eps_bar, phi);
  if (!full.feasible()) throw DomainError("msdr_decomposition_residual: negative discriminant");
  const double c_bl = r * (1.0 - eps_bar) / 2.0;
  const double r_star =
      (r / 4.0) * std::sqrt(1.0 + (phi - 2.0) * eps_bar + (1.0 - phi) * eps_bar * eps_bar);
  return std::abs(full.value - (c_bl / 2.0 + r_star));
}

}  // namespace fblrelay
