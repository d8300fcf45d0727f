#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "minsurf/weierstrass.hpp"
#include "test_support.hpp"

using namespace minsurf;
using minsurf::testing::random_config;
using minsurf::testing::sqrt13_config;

namespace {

constexpr double kPi = std::numbers::pi;

cplx random_regular_point(std::mt19937_64& rng, const Configuration& c) {
  for (;;) {
    const cplx z = minsurf::testing::random_in_disk(rng, 4.0);
    bool ok = std::abs(z) > 1e-3;
    for (const cplx p : c.points) ok = ok && std::abs(z - p) > 1e-3;
    if (ok) return z;
  }
}

}  // namespace

TEST_CASE("gauss_map examples") {
  const Configuration two{{{-1.0, 0.0}, {1.0, 0.0}}, {1.0, -1.0}, ""};
  CHECK(gauss_map(two, 0.0) == cplx{0.0});
  CHECK(std::abs(gauss_map(two, cplx{0.0, 1.0}) - cplx{0.0, 1.0}) < 1e-15);
  CHECK_THROWS_AS(gauss_map(two, 1.0), PoleError);

  // Near p_2 of the asymmetric example G(z) (z - p_2) -> p_2 * 3/4.
  const Configuration c = sqrt13_config();
  const cplx p2 = c.points[1];
  for (const double eps : {1e-4, 1e-6}) {
    const cplx z = p2 + cplx{eps, eps};
    CHECK(std::abs(gauss_map(c, z) * (z - p2) - 0.75 * p2) <= 10.0 * eps);
  }
}

TEST_CASE("gdh_residue examples") {
  const Configuration unbalanced{{{-1.0, 0.0}, {2.0, 0.0}}, {1.0, -1.0}, ""};
  CHECK(std::abs(gdh_residue(unbalanced, 0) - 1.0 / 3.0) < 1e-15);
  CHECK_THROWS_AS(gdh_residue(unbalanced, 2), std::out_of_range);

  for (int n = 1; n <= 12; ++n) {
    const Configuration c = legendre_config(n);
    for (std::size_t k = 0; k < c.size(); ++k) CHECK(std::abs(gdh_residue(c, k)) <= 1e-10);
  }

  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const Configuration c = random_config(rng, 4);
    Configuration s = c;
    for (auto& p : s.points) p *= cplx{2.5, -1.0};
    for (std::size_t k = 0; k < c.size(); ++k)
      CHECK(std::abs(gdh_residue(s, k) - gdh_residue(c, k)) <= 1e-12 * (1.0 + std::abs(gdh_residue(c, k))) * 10.0);
  }
}

TEST_CASE("integrand is a null curve and dh/G = dz/z") {
  std::mt19937_64 rng(8);
  int samples = 0;
  while (samples < 1000) {
    const Configuration c = random_config(rng, 2 + samples % 6);
    const WeierstrassData w(c);
    const cplx z = random_regular_point(rng, c);
    const CVec3 phi = w.integrand(z);
    const cplx sum = phi[0] * phi[0] + phi[1] * phi[1] + phi[2] * phi[2];
    const double scale = std::norm(phi[0]) + std::norm(phi[1]) + std::norm(phi[2]);
    CHECK(std::abs(sum) <= 1e-12 * scale);
    const cplx g = w.gauss(z);
    if (std::abs(g) > 1e-8) CHECK(std::abs(z * w.height(z) / g - 1.0) <= 1e-12);
    ++samples;
  }
}

TEST_CASE("contour_period around each puncture of a balanced configuration vanishes") {
  for (const Configuration& c : {legendre_config(1), legendre_config(3), legendre_config(6), sqrt13_config()}) {
    for (std::size_t k = 0; k < c.size(); ++k) {
      const PeriodVector pv = contour_period(c, c.points[k], default_radius(c, k));
      for (double x : pv.coords) CHECK(std::abs(x) <= 1e-8);
    }
  }
}

TEST_CASE("contour_period around 0 and around everything is (0, -pi, 0)") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 30; ++t) {
    // Any configuration works around 0; only sum alpha = 0 matters for the big circle.
    const Configuration c = random_config(rng, 2 + t % 5);
    const PeriodVector at0 = contour_period(c, 0.0, default_radius(c, c.size()));
    CHECK(std::abs(at0.coords[0]) <= 1e-8);
    CHECK(std::abs(at0.coords[1] + kPi) <= 1e-8);
    CHECK(std::abs(at0.coords[2]) <= 1e-8);

    double far = 0.0;
    for (const cplx p : c.points) far = std::max(far, std::abs(p));
    const PeriodVector big = contour_period(c, 0.0, 2.0 * far);
    CHECK(std::abs(big.coords[0]) <= 1e-8);
    CHECK(std::abs(big.coords[1] + kPi) <= 1e-8);
    CHECK(std::abs(big.coords[2]) <= 1e-8);
  }
}

TEST_CASE("third period coordinate vanishes around any puncture; first two track the residue") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 30; ++t) {
    const Configuration c = random_config(rng, 3 + t % 4);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const PeriodVector pv = contour_period(c, c.points[k], default_radius(c, k));
      const cplx res = gdh_residue(c, k);
      CHECK(std::abs(pv.coords[2]) <= 1e-8);
      // Re of 2 pi i * (-res/2) and of 2 pi i * (i res / 2)
      CHECK(std::abs(pv.coords[0] - kPi * res.imag()) <= 1e-8 * (1.0 + std::abs(res)));
      CHECK(std::abs(pv.coords[1] + kPi * res.real()) <= 1e-8 * (1.0 + std::abs(res)));
    }
  }
}

TEST_CASE("numerical residue of G dh agrees with the closed form") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const Configuration c = random_config(rng, 2 + t % 7);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const cplx num = contour_gdh_residue(c, c.points[k], default_radius(c, k));
      const cplx ana = gdh_residue(c, k);
      CHECK(std::abs(num - ana) <= 1e-9 * std::max(1.0, std::abs(ana)));
    }
  }
}

TEST_CASE("contour geometry and convergence errors") {
  const Configuration c = legendre_config(2);
  CHECK_THROWS_AS(contour_period(c, 0.0, 1.0), GeometryError);  // passes through p = 1
  CHECK_THROWS_AS(contour_period(c, c.points[0], 0.0), GeometryError);
  CHECK_THROWS_AS(contour_period(c, c.points[0], 1.0, ContourOptions{.max_nodes = 16}), QuadratureError);
}

TEST_CASE("verify_conditions: Legendre configuration passes everything") {
  const ConditionsReport r = verify_conditions(legendre_config(2));
  CHECK(r.all_passed());
  CHECK(r.checks.size() == 5);
  CHECK(r.order_g_at_zero == 1);
  CHECK(r.order_dh_at_zero == 0);
  CHECK(r.order_g_at_infinity == 1);
  CHECK(r.order_dh_at_infinity == 0);
}

TEST_CASE("verify_conditions: necksize sum violation is reported, not thrown") {
  const Configuration c{{{-1.0, 0.0}, {1.0, 0.0}}, {1.0, -0.5}, ""};
  const ConditionsReport r = verify_conditions(c);
  CHECK_FALSE(r.all_passed());
  const auto& d = r.checks.back();
  CHECK(d.name == "necksizes sum to zero");
  CHECK_FALSE(d.passed);
  CHECK(d.defect == doctest::Approx(0.5));
  // G(infinity) = sum alpha != 0, so the end at infinity is not annular either.
  CHECK(r.order_g_at_infinity == 0);
}

TEST_CASE("verify_conditions: structural checks hold for random configurations") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const Configuration c = random_config(rng, 2 + t % 7);
    const ConditionsReport r = verify_conditions(c);
    for (const auto& chk : r.checks) {
      CAPTURE(chk.name);
      CAPTURE(chk.detail);
      CHECK(chk.passed);
    }
  }
}

TEST_CASE("verify_conditions: double zero of dh away from 0 is matched with multiplicity") {
  // Partial fractions of (z - 5)^2 / ((z-1)(z-2)(z-3)(z-4)).
  const Configuration c{{{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}, {4.0, 0.0}}, {-8.0 / 3.0, 4.5, -2.0, 1.0 / 6.0}, ""};
  const ConditionsReport r = verify_conditions(c);
  CHECK(r.all_passed());
  CHECK(r.checks[0].detail == "2 zero(s) away from 0");
  // deg N = 2 = m - 2, so G has a simple zero at infinity.
  CHECK(r.order_g_at_infinity == 1);
}

TEST_CASE("verify_conditions: higher-order annular end at 0") {
  // h = 4z / (z^4 - 1): dh vanishes once at 0, G twice.
  const Configuration c{{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}, {1.0, 1.0, -1.0, -1.0}, ""};
  const ConditionsReport r = verify_conditions(c);
  CHECK(r.all_passed());
  CHECK(r.order_g_at_zero == 2);
  CHECK(r.order_dh_at_zero == 1);
  CHECK(r.order_g_at_infinity == 2);
}
