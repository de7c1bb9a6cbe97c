#include <doctest.h>

#include <cmath>
#include <random>

#include "fblrelay/errors.hpp"
#include "fblrelay/link_layer.hpp"

using namespace fblrelay;

TEST_SUITE("link_layer") {

TEST_CASE("Bernoulli service moments") {
  const ServiceStats a = service_stats(0.2, 500, 0.0);
  CHECK(a.mean == doctest::Approx(100.0));
  CHECK(a.variance == 0.0);
  const ServiceStats b = service_stats(0.2, 500, 0.5);
  CHECK(b.mean == doctest::Approx(50.0));
  CHECK(b.variance == doctest::Approx(2500.0));
  const ServiceStats c = service_stats(0.2, 500, 1.0);
  CHECK(c.mean == 0.0);
  CHECK(c.variance == 0.0);
  CHECK_THROWS_AS(service_stats(0.2, 500, 1.5), DomainError);
}

TEST_CASE("effective capacity") {
  const ServiceStats s{50.0, 2500.0, 0.5};
  CHECK(effective_capacity_clt(s, 0.0) == 50.0);
  CHECK(effective_capacity_clt(s, 0.01) == doctest::Approx(37.5));
  CHECK(effective_capacity_clt(ServiceStats{50.0, 0.0, 0.0}, 3.0) == 50.0);
  const auto pt = qos_exponent_point(s, 0.01);
  CHECK(pt.theta == 0.01);
  CHECK(pt.ec <= s.mean);
  CHECK_THROWS_AS(effective_capacity_clt(s, -1.0), DomainError);
}

TEST_CASE("phi and MSDR special values") {
  const QoSPair qos{1e4, 1e-2};
  CHECK(qos_phi(500, qos) == doctest::Approx(-0.9210340371976183).epsilon(1e-14));

  const double r = 0.937;
  CHECK(msdr(r, 500, 0.0, qos).value == r / 2.0);
  // P_d -> 1 makes phi vanish
  for (double e : {0.01, 0.2, 0.7, 0.999}) {
    CHECK(msdr_with_phi(r, e, 0.0).value == r * (1.0 - e) / 2.0);
  }
  CHECK(msdr_with_phi(r, 0.3, -0.5).value ==
        doctest::Approx(msdr(r, 500, 0.3, QoSPair{2000.0 * std::log(0.01) / -0.5, 0.01}).value).epsilon(1e-14));
}

TEST_CASE("MSDR feasibility") {
  const QoSPair qos{1e4, 1e-2};
  const MsdrResult too_long = msdr(1.0, 6000, 0.1, qos);
  CHECK(too_long.value == 0.0);
  CHECK(too_long.status == MsdrStatus::period_exceeds_delay);
  CHECK_FALSE(too_long.feasible());
  // phi = -0.921: discriminant negative once eps > 1/(1 - phi)
  const MsdrResult unsupported = msdr(1.0, 500, 0.6, qos);
  CHECK(unsupported.value == 0.0);
  CHECK(unsupported.status == MsdrStatus::qos_unsupportable);
  CHECK(msdr(1.0, 500, 0.5, qos).feasible());
  CHECK_THROWS_AS(msdr(1.0, 500, 0.1, QoSPair{1e4, 0.0}), ValidationError);
}

TEST_CASE("MSDR never exceeds BL-throughput") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double r = 3.0 * u(rng);
    const double e = u(rng);
    const QoSPair qos{2e3 + 1e5 * u(rng), 1e-6 + 0.5 * u(rng)};
    const MsdrResult res = msdr(r, 500, e, qos);
    CHECK(res.value <= r * (1.0 - e) / 2.0 + 1e-15);
  }
}

TEST_CASE("decomposition identity") {
  const QoSPair qos{1e4, 1e-2};
  CHECK(msdr_decomposition_check(1.3, 500, 0.0, qos) == 0.0);
  CHECK(msdr_decomposition_residual(1.3, 0.3, 0.0) == 0.0);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 1000) {
    const double r = 4.0 * u(rng);
    const double e = u(rng);
    const Blocklength m = 100 + static_cast<Blocklength>(1900 * u(rng));
    const QoSPair q{2.0 * m + 1e5 * u(rng), 1e-8 + (1.0 - 2e-8) * u(rng)};
    if (!msdr(r, m, e, q).feasible()) continue;
    CHECK(msdr_decomposition_check(r, m, e, q) < 1e-12);
    ++checked;
  }
  CHECK_THROWS_AS(msdr_decomposition_check(1.0, 500, 0.6, qos), DomainError);
}

TEST_CASE("MSDR from service moments matches the closed form") {
  const QoSPair qos{1e4, 1e-2};
  for (double e : {0.0, 0.05, 0.3}) {
    const MsdrResult direct = msdr(1.1, 700, e, qos);
    const MsdrResult general = msdr_from_stats(service_stats(1.1, 700, e), 700, qos);
    CHECK(general.value == doctest::Approx(direct.value).epsilon(1e-14));
  }
  CHECK(msdr_from_stats(service_stats(1.1, 6000, 0.1), 6000, qos).status == MsdrStatus::period_exceeds_delay);
}

TEST_CASE("direct MSDR") {
  const QoSPair qos{1e4, 1e-2};
  CHECK(msdr_direct(0.4, 1000, 0.0, qos).value == doctest::Approx(0.4).epsilon(1e-15));
  // Single hop over m_direct symbols equals the two-hop form with rate 2 r_dir and m_direct / 2.
  CHECK(msdr_direct(0.4, 1000, 0.2, qos).value == doctest::Approx(msdr(0.8, 500, 0.2, qos).value).epsilon(1e-14));
  CHECK(msdr_direct(0.4, 20000, 0.2, qos).status == MsdrStatus::period_exceeds_delay);
}

}
