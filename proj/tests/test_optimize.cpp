#include <doctest.h>

#include <cmath>
#include <random>

#include "fblrelay/fbl_core.hpp"
#include "fblrelay/optimize.hpp"
#include "fblrelay/relay_phy.hpp"

using namespace fblrelay;

TEST_SUITE("optimize") {

TEST_CASE("parabola") {
  const OptResult r = maximize_unimodal([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-6);
  CHECK(r.flag == OptFlag::converged);
  CHECK(std::abs(r.argmax - 0.3) <= 1e-6);
  CHECK(r.bracket <= 1e-6);
  CHECK(r.iterations > 0);
}

TEST_CASE("constant objective") {
  const OptResult r = maximize_unimodal([](double) { return 2.5; }, -1.0, 1.0, 1e-6);
  CHECK(r.flag == OptFlag::converged);
  CHECK(r.value == 2.5);
  CHECK(r.argmax >= -1.0);
  CHECK(r.argmax <= 1.0);
}

TEST_CASE("maximum at an endpoint") {
  const OptResult r = maximize_unimodal([](double x) { return x; }, 0.0, 2.0, 1e-7);
  CHECK(r.flag == OptFlag::converged);
  CHECK(r.argmax == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("two bumps are flagged") {
  auto f = [](double x) { return std::exp(-50 * (x - 0.2) * (x - 0.2)) + std::exp(-50 * (x - 0.8) * (x - 0.8)); };
  const OptResult r = maximize_unimodal(f, 0.0, 1.0, 1e-6);
  CHECK(r.flag == OptFlag::non_unimodal_detected);
  CHECK(r.value == doctest::Approx(f(r.argmax)));
  CHECK(to_string(r.flag) == "non_unimodal_detected");
}

TEST_CASE("iteration budget") {
  const OptResult r = maximize_unimodal([](double x) { return -x * x; }, -1.0, 1.0, 1e-12, 3);
  CHECK(r.flag == OptFlag::budget_exhausted);
  CHECK(r.iterations == 3);
}

TEST_CASE("golden section never loses to the scan") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double c = u(rng);
    const double k = 1.0 + 20.0 * u(rng);
    auto f = [c, k](double x) { return -std::abs(x - c) * k + std::sin(x); };
    const OptResult r = maximize_unimodal(f, 0.0, 1.0, 1e-8);
    double scan_best = -1e300;
    for (int j = 0; j < kCoarseScanPoints; ++j) scan_best = std::max(scan_best, f(j / 32.0));
    CHECK(r.value >= scan_best - 1e-12);
  }
}

TEST_CASE("rejects bad intervals") {
  CHECK_THROWS_AS(maximize_unimodal([](double x) { return x; }, 1.0, 1.0, 1e-3), DomainError);
}

TEST_CASE("perfect-CSI inner problem") {
  SystemParams p;
  p.p_tx = 1.0;
  p.sigma2 = 1.0;
  const LinkGains g{0.3, 5.0, 4.0};

  const OptResult zero = maximize_rate_perfect_csi(FadingDraw{0.0, 0.0, 0.0}, 500, g, p);
  CHECK(zero.argmax == 0.0);
  CHECK(zero.value == 0.0);

  const OptResult big = maximize_rate_perfect_csi(FadingDraw{1e6, 1e6, 1e6}, 500, g, p);
  const double cap = shannon_c(1e6 * g.bottleneck(), p);
  CHECK(big.value == doctest::Approx(cap / 2.0).epsilon(0.01));

  std::mt19937_64 rng(21);
  std::exponential_distribution<double> ex(1.0);
  for (int i = 0; i < 100; ++i) {
    const FadingDraw d{ex(rng), ex(rng), ex(rng)};
    const OptResult r = maximize_rate_perfect_csi(d, 500, g, p);
    CHECK(r.flag == OptFlag::converged);
    const double e = overall_error_instant(d, r.argmax, 500, g, p);
    CHECK(e > 0.0);
    CHECK(e < 0.5);

    // Brute-force grid oracle
    const double upper = 1.5 * shannon_c(std::min(d.z2 * g.g2, d.z1 * g.g1 + d.z3 * g.g3), p);
    const int n = 10'000;
    const double h = upper / n;
    double best_x = 0.0, best_v = -1.0;
    for (int k = 1; k <= n; ++k) {
      const double x = k * h;
      const double v = x * (1.0 - overall_error_instant(d, x, 500, g, p)) / 2.0;
      if (v > best_v) {
        best_v = v;
        best_x = x;
      }
    }
    CHECK(std::abs(r.argmax - best_x) <= 2.0 * h);
    // flat top: a 1e-5 bracket costs O(1e-10) in value
    CHECK(r.value >= best_v - 1e-9);
  }
}

}
