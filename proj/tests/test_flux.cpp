#include <doctest.h>

#include <cmath>

#include "kstep/flux.hpp"
#include "testutil.hpp"

using namespace kstep;

namespace {
const FluxSpec k2 = FluxSpec::totally_asymmetric(2);
}

TEST_CASE("flux: closed-form values for k = 2") {
  // Exact rational evaluations of u + u^2 - 2u^3.
  CHECK(flux(k2, 0.0) == 0.0);
  CHECK(flux(k2, 1.0) == 0.0);
  CHECK(flux(k2, 0.25) == doctest::Approx(9.0 / 32.0).epsilon(1e-15));
  CHECK(flux(k2, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("flux: matches the term-by-term sum for general k") {
  testutil::Uniform u(1);
  for (int k : {1, 2, 3, 5, 9, 20}) {
    const FluxSpec spec = FluxSpec::totally_asymmetric(k);
    for (int i = 0; i < 200; ++i) {
      const double x = u(0.0, 1.0);
      CHECK(flux(spec, x) == doctest::Approx(testutil::naive_flux(k, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("flux: nonnegative, zero at both ends, increasing in k") {
  testutil::Uniform u(2);
  for (int k = 1; k <= 12; ++k) {
    const FluxSpec spec = FluxSpec::totally_asymmetric(k);
    CHECK(flux(spec, 0.0) == 0.0);
    CHECK(flux(spec, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    for (int i = 0; i < 100; ++i) {
      const double x = u(0.0, 1.0);
      CHECK(flux(spec, x) >= 0.0);
      CHECK(flux(FluxSpec::totally_asymmetric(k + 1), x) >= flux(spec, x) - 1e-14);
    }
  }
}

TEST_CASE("flux: domain handling") {
  CHECK(flux(k2, 1.0 + 1e-13) == doctest::Approx(0.0).epsilon(1e-12));  // clamped
  CHECK(flux(k2, -1e-13) == doctest::Approx(0.0));
  CHECK_THROWS_AS(flux(k2, 1.1), std::domain_error);
  CHECK_THROWS_AS(flux(k2, -0.1), std::domain_error);
}

TEST_CASE("characteristic speed: k = 2 closed form and finite differences") {
  CHECK(characteristic_speed(k2, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(characteristic_speed(k2, 1.0 / 6.0) == doctest::Approx(7.0 / 6.0).epsilon(1e-15));
  CHECK(characteristic_speed(k2, 1.0) == doctest::Approx(-3.0).epsilon(1e-15));
  testutil::Uniform u(3);
  for (int k : {1, 2, 3, 7}) {
    const FluxSpec spec = FluxSpec::totally_asymmetric(k);
    for (int i = 0; i < 50; ++i) {
      const double x = u(0.01, 0.99);
      const double fd = testutil::fd_derivative(
          [&](double y) { return testutil::naive_flux(k, y); }, x);
      CHECK(characteristic_speed(spec, x) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("inflection: 1/6 for k = 2, absent for k = 1, bracketed root otherwise") {
  CHECK(*inflection(k2) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(!inflection(FluxSpec::totally_asymmetric(1)).has_value());
  for (int k : {3, 4, 8}) {
    const FluxSpec spec = FluxSpec::totally_asymmetric(k);
    const double r = *inflection(spec);
    CHECK(r > 0.0);
    CHECK(r < 1.0);
    CHECK(flux_curvature(spec, r - 1e-6) > 0.0);
    CHECK(flux_curvature(spec, r + 1e-6) < 0.0);
    CHECK(std::abs(flux_curvature(spec, r)) < 1e-8);
  }
  // k = 2 curvature changes sign exactly once on (0, 1): G'' = 2 - 12u.
  testutil::Uniform u(4);
  for (int i = 0; i < 100; ++i) {
    const double x = u(0.0, 1.0);
    CHECK(flux_curvature(k2, x) == doctest::Approx(2.0 - 12.0 * x).epsilon(1e-13));
  }
}

TEST_CASE("chord slope: values and coincident-argument error") {
  CHECK(chord_slope(k2, 0.0, 1.0) == 0.0);
  // (G(0.2) - G(0.05)) / 0.15 with both fluxes evaluated term by term.
  const double expected =
      (testutil::naive_flux(2, 0.2) - testutil::naive_flux(2, 0.05)) / 0.15;
  CHECK(chord_slope(k2, 0.05, 0.2) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(chord_slope(k2, 0.05, 0.2) == doctest::Approx(1.145).epsilon(1e-12));
  CHECK(chord_slope(k2, 0.0, 0.25) == doctest::Approx(9.0 / 8.0).epsilon(1e-14));
  CHECK_THROWS_AS(chord_slope(k2, 0.3, 0.3), std::invalid_argument);
}

TEST_CASE("star points: k = 2 closed forms") {
  CHECK(star_upper(k2, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(star_upper(k2, 0.05) == doctest::Approx(0.225).epsilon(1e-15));
  // Tangency at the star point: S[0; 1/4] = H(1/4) = 9/8.
  CHECK(chord_slope(k2, 0.0, 0.25) == doctest::Approx(characteristic_speed(k2, 0.25)));
  CHECK(characteristic_speed(k2, 0.25) == doctest::Approx(9.0 / 8.0).epsilon(1e-15));

  const StarPoint half = star_lower(k2, 0.5);
  CHECK(half.value == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(!half.below_range);
  // Its tangency: S[1/2; 0] = 1 = H(0).
  CHECK(chord_slope(k2, 0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(characteristic_speed(k2, 0.0) == 1.0);
  CHECK(star_lower(k2, 0.45).value == doctest::Approx(0.025).epsilon(1e-14));
  const StarPoint deep = star_lower(k2, 0.7);
  CHECK(deep.value == doctest::Approx(-0.1).epsilon(1e-14));
  CHECK(deep.below_range);

  CHECK_THROWS_AS(star_upper(k2, 0.2), std::domain_error);
  CHECK_THROWS_AS(star_lower(k2, 0.1), std::domain_error);
  CHECK_THROWS_AS(star_upper(FluxSpec::totally_asymmetric(1), 0.1), std::domain_error);
}

TEST_CASE("star points: tangency identity across the admissible range") {
  testutil::Uniform u(5);
  for (int i = 0; i < 200; ++i) {
    const double x = u(0.0, 1.0 / 6.0 - 1e-9);
    const double s = star_upper(k2, x);
    CHECK(std::abs(chord_slope(k2, x, s) - characteristic_speed(k2, s)) <= 1e-12);
  }
  for (int i = 0; i < 200; ++i) {
    const double x = u(1.0 / 6.0 + 1e-6, 0.5);  // star stays inside [0, 1]
    const StarPoint s = star_lower(k2, x);
    REQUIRE(!s.below_range);
    CHECK(std::abs(chord_slope(k2, x, s.value) - characteristic_speed(k2, s.value)) <=
          1e-12);
  }
}

TEST_CASE("star points: numeric route agrees with the k = 2 closed form") {
  testutil::Uniform u(6);
  for (int i = 0; i < 100; ++i) {
    const double x = u(1e-4, 1.0 / 6.0 - 1e-4);
    CHECK(detail::star_upper_numeric(k2, x) ==
          doctest::Approx((1.0 - 2.0 * x) / 4.0).epsilon(1e-8));
  }
  for (int i = 0; i < 100; ++i) {
    const double x = u(1.0 / 6.0 + 1e-3, 0.5 - 1e-3);
    const StarPoint s = detail::star_lower_numeric(k2, x);
    REQUIRE(!s.below_range);
    CHECK(s.value == doctest::Approx((1.0 - 2.0 * x) / 4.0).epsilon(1e-8));
  }
  // General-k numeric star points satisfy their tangency identity.
  const FluxSpec k3 = FluxSpec::totally_asymmetric(3);
  for (int i = 0; i < 50; ++i) {
    const double x = u(0.0, *inflection(k3) - 1e-6);
    const double s = star_upper(k3, x);
    CHECK(s > *inflection(k3));
    CHECK(std::abs(chord_slope(k3, x, s) - characteristic_speed(k3, s)) <= 1e-10);
  }
}

TEST_CASE("density_from_speed: closed forms and round trips") {
  CHECK(density_from_speed(k2, 0.5, Branch::upper) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(density_from_speed(k2, 1.0, Branch::lower) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(density_from_speed(k2, characteristic_speed(k2, 0.05), Branch::lower) ==
        doctest::Approx(0.05).epsilon(1e-13));
  testutil::Uniform u(7);
  for (int i = 0; i < 200; ++i) {
    const double x = u(0.0, 1.0);
    if (std::abs(x - 1.0 / 6.0) < 1e-6) continue;
    const Branch b = x < 1.0 / 6.0 ? Branch::lower : Branch::upper;
    CHECK(std::abs(density_from_speed(k2, characteristic_speed(k2, x), b) - x) <= 1e-12);
  }
  const FluxSpec k4 = FluxSpec::totally_asymmetric(4);
  const double infl4 = *inflection(k4);
  for (int i = 0; i < 100; ++i) {
    const double x = u(0.0, 1.0);
    if (std::abs(x - infl4) < 1e-6) continue;
    const Branch b = x < infl4 ? Branch::lower : Branch::upper;
    CHECK(std::abs(density_from_speed(k4, characteristic_speed(k4, x), b) - x) <= 1e-10);
  }
  CHECK_THROWS_AS(density_from_speed(k2, 1.5, Branch::upper), std::out_of_range);
  CHECK_THROWS_AS(density_from_speed(k2, 0.5, Branch::lower), std::out_of_range);
}

TEST_CASE("nearest-neighbor k = 5 flux") {
  const FluxSpec k5 = FluxSpec::totally_asymmetric(5);
  // p = 1 collapses the bracket to 1 + 2u + 3u^2 + 4u^3 + 5u^4.
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    CHECK(flux_nn_k5(1.0, 0.0, x) == doctest::Approx(flux(k5, x)).epsilon(1e-12));
  }
  CHECK(flux_nn_k5(1.0, 0.0, 0.0) == 0.0);
  CHECK(flux_nn_k5(0.7, 0.3, 1.0) == 0.0);
  CHECK(flux_nn_k5(0.7, 0.3, 0.4) > 0.0);
  CHECK_THROWS_AS(flux_nn_k5(0.7, 0.2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(flux_nn_k5(0.4, 0.6, 0.5), std::invalid_argument);
  // Variant dispatch through FluxSpec.
  const FluxSpec nn = FluxSpec::nearest_neighbor_k5(0.8);
  CHECK(flux(nn, 0.3) == doctest::Approx(flux_nn_k5(0.8, 0.2, 0.3)).epsilon(1e-14));
  const double fd = testutil::fd_derivative([&](double y) { return flux(nn, y); }, 0.3);
  CHECK(characteristic_speed(nn, 0.3) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("long-range limit: G_k(u) -> u / (1 - u)") {
  auto [g0, l0] = longrange_limit_pair(0.0, 7);
  CHECK(g0 == 0.0);
  CHECK(l0 == 0.0);
  auto [g50, l50] = longrange_limit_pair(0.5, 50);
  CHECK(l50 == 1.0);
  CHECK(std::abs(g50 - 1.0) <= 1e-12);
  auto [g2, l2] = longrange_limit_pair(0.5, 2);
  CHECK(g2 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(l2 == 1.0);
  CHECK_THROWS_AS(longrange_limit_pair(1.0, 3), std::domain_error);
}
