#include <doctest.h>

#include <cmath>

#include "kstep/riemann.hpp"
#include "testutil.hpp"

using namespace kstep;

namespace {

const FluxSpec k2 = FluxSpec::totally_asymmetric(2);

RiemannProblem pb(double lambda, double rho, int k = 2) {
  return {lambda, rho, FluxSpec::totally_asymmetric(k)};
}

// Sample one (lambda, rho) pair of the requested case class, k = 2.
std::pair<double, double> sample_case(int c, testutil::Uniform& u) {
  const double infl = 1.0 / 6.0;
  for (;;) {
    double lambda, rho;
    switch (c) {
      case 1:
        lambda = u(1e-3, infl - 1e-3);
        rho = u(lambda + 1e-4, infl - 1e-4);
        break;
      case 2: {
        rho = u(1e-3, infl - 1e-3);
        const double rs = (1.0 - 2.0 * rho) / 4.0;
        lambda = u(rho + 1e-4, rs - 1e-4);
        break;
      }
      case 3: {
        rho = u(1e-3, infl - 1e-3);
        const double rs = (1.0 - 2.0 * rho) / 4.0;
        lambda = u(rs + 1e-4, 1.0 - 1e-3);
        break;
      }
      case 4:
        rho = u(infl + 1e-3, 1.0 - 1e-3);
        lambda = u(rho + 1e-4, 1.0 - 1e-4);
        break;
      case 5: {
        rho = u(infl + 1e-3, 1.0 - 1e-3);
        const double rs = std::max(0.0, (1.0 - 2.0 * rho) / 4.0);
        lambda = u(rs + 1e-4, rho - 1e-4);
        break;
      }
      default: {  // 6
        rho = u(infl + 1e-3, 0.5 - 2e-3);
        const double rs = (1.0 - 2.0 * rho) / 4.0;
        lambda = u(1e-4, rs - 1e-4);
        break;
      }
    }
    if (lambda > 0.0 && lambda < 1.0 && rho > 0.0 && rho < 1.0 && lambda != rho)
      return {lambda, rho};
  }
}

}  // namespace

TEST_CASE("classify: the six canonical data pairs") {
  CHECK(classify(pb(0.05, 0.1)).label == CaseLabel::case1);
  CHECK(classify(pb(0.2, 0.05)).label == CaseLabel::case2);   // rho* = 0.225 > lambda
  CHECK(classify(pb(0.5, 0.05)).label == CaseLabel::case3);   // lambda > rho* = 0.225
  CHECK(classify(pb(0.6, 0.3)).label == CaseLabel::case4);
  CHECK(classify(pb(0.3, 0.7)).label == CaseLabel::case5);    // rho_* = -0.1 unreachable
  CHECK(classify(pb(0.01, 0.45)).label == CaseLabel::case6);  // rho_* = 0.025 > lambda
  CHECK(classify(pb(0.3, 0.3)).label == CaseLabel::degenerate);
  CHECK(classify(pb(0.05, 1.0 / 6.0 + 1e-10)).near_degenerate);
  CHECK(!classify(pb(0.05, 0.4)).near_degenerate);
}

TEST_CASE("solve: contact-discontinuity structure for (0.5, 0.05)") {
  const SelfSimilarSolution sol = solve(pb(0.5, 0.05));
  CHECK(sol.case_label == CaseLabel::case3);
  REQUIRE(sol.breakpoints.size() == 2);
  CHECK(sol.breakpoints[0] == doctest::Approx(0.5).epsilon(1e-14));      // H(0.5)
  CHECK(sol.breakpoints[1] == doctest::Approx(1.14625).epsilon(1e-14));  // H(0.225)
  REQUIRE(sol.segments.size() == 3);
  CHECK(!sol.segments[0].is_fan);
  CHECK(sol.segments[0].value == 0.5);
  CHECK(sol.segments[1].is_fan);
  CHECK(sol.segments[1].branch == Branch::upper);
  CHECK(sol.segments[2].value == 0.05);
  REQUIRE(sol.discontinuities.size() == 1);
  CHECK(sol.discontinuities[0].kind == DiscontinuityKind::contact);
  CHECK(sol.discontinuities[0].velocity == doctest::Approx(1.14625).epsilon(1e-14));
  CHECK(sol.discontinuities[0].u_left == doctest::Approx(0.225).epsilon(1e-14));
  CHECK(sol.discontinuities[0].u_right == doctest::Approx(0.05).epsilon(1e-14));
}

TEST_CASE("solve: shock cases and the degenerate datum") {
  const SelfSimilarSolution s2 = solve(pb(0.2, 0.05));
  REQUIRE(s2.discontinuities.size() == 1);
  CHECK(s2.discontinuities[0].kind == DiscontinuityKind::shock);
  CHECK(s2.discontinuities[0].velocity == doctest::Approx(1.145).epsilon(1e-13));

  const SelfSimilarSolution s5 = solve(pb(0.3, 0.7));
  REQUIRE(s5.discontinuities.size() == 1);
  CHECK(s5.discontinuities[0].velocity == doctest::Approx(0.42).epsilon(1e-13));

  const SelfSimilarSolution sd = solve(pb(0.3, 0.3));
  CHECK(sd.breakpoints.empty());
  REQUIRE(sd.segments.size() == 1);
  CHECK(sd.segments[0].value == 0.3);
  CHECK(evaluate(sd, -5.0, 1.0) == 0.3);
  CHECK(evaluate(sd, 5.0, 1.0) == 0.3);
}

TEST_CASE("evaluate: fan values, left state, right-limit convention") {
  const SelfSimilarSolution s3 = solve(pb(0.5, 0.05));
  // Inside the fan: h2(0.8) = (1 + sqrt(7 - 4.8)) / 6.
  CHECK(evaluate(s3, 0.8, 1.0) ==
        doctest::Approx((1.0 + std::sqrt(2.2)) / 6.0).epsilon(1e-13));
  CHECK(evaluate(s3, -10.0, 1.0) == 0.5);
  // On the contact line the right limit is returned.
  CHECK(evaluate(s3, s3.discontinuities[0].velocity, 1.0) == 0.05);

  const SelfSimilarSolution s2 = solve(pb(0.2, 0.05));
  CHECK(evaluate(s2, s2.discontinuities[0].velocity, 1.0) == 0.05);

  CHECK_THROWS_AS(evaluate(s3, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(evaluate(s3, 0.0, -1.0), std::domain_error);
}

TEST_CASE("evaluate: exact self-similarity and range bounds") {
  testutil::Uniform u(11);
  for (int c = 1; c <= 6; ++c) {
    auto [lambda, rho] = sample_case(c, u);
    const SelfSimilarSolution sol = solve(pb(lambda, rho));
    const double lo = std::min(lambda, rho), hi = std::max(lambda, rho);
    for (int i = 0; i < 100; ++i) {
      const double x = u(-4.0, 2.0);
      const double t = u(0.1, 10.0);
      const double val = evaluate(sol, x, t);
      // Exact in v = x/t; the only wiggle is the rounding of (7x)/(7t).
      CHECK(val == doctest::Approx(evaluate(sol, 7.0 * x, 7.0 * t)).epsilon(1e-15));
      CHECK(val >= lo - 1e-12);
      CHECK(val <= hi + 1e-12);
    }
  }
}

TEST_CASE("case 1 is monotone; case 3 has a single non-characteristic jump") {
  const SelfSimilarSolution s1 = solve(pb(0.05, 0.1));
  CHECK(s1.discontinuities.empty());
  double prev = -1.0;
  for (double v = -1.0; v <= 2.0; v += 0.01) {
    const double val = evaluate(s1, v, 1.0);
    CHECK(val >= prev - 1e-13);
    prev = val;
  }
  const SelfSimilarSolution s3 = solve(pb(0.5, 0.05));
  REQUIRE(s3.discontinuities.size() == 1);
  // No characteristics cross the contact: H(lambda) < H(rho*).
  CHECK(characteristic_speed(k2, 0.5) < s3.discontinuities[0].velocity);
}

TEST_CASE("Rankine-Hugoniot checker") {
  for (auto [l, r] : {std::pair{0.2, 0.05}, {0.5, 0.05}, {0.3, 0.7}, {0.01, 0.45}}) {
    CHECK(check_rankine_hugoniot(solve(pb(l, r))) <= 1e-12);
  }
  CHECK(check_rankine_hugoniot(solve(pb(0.3, 0.3))) == 0.0);
  SelfSimilarSolution bad = solve(pb(0.5, 0.05));
  bad.discontinuities[0].velocity = 1.0;  // wrong speed on purpose
  const double expected = std::abs(1.0 - chord_slope(k2, 0.225, 0.05));
  CHECK(check_rankine_hugoniot(bad) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(check_rankine_hugoniot(bad) > 0.1);
}

TEST_CASE("entropy-condition checker") {
  CHECK(check_condition_E(solve(pb(0.2, 0.05)), 1000) <= 1e-12);
  CHECK(check_condition_E(solve(pb(0.5, 0.05)), 1000) <= 1e-12);
  CHECK(check_condition_E(solve(pb(0.3, 0.7)), 1000) <= 1e-12);
  // The increasing jump 0.05 -> 0.5 is a legitimate entropy shock...
  const SelfSimilarSolution s5 = solve(pb(0.05, 0.5));
  CHECK(s5.case_label == CaseLabel::case5);
  CHECK(check_condition_E(s5, 1000) <= 1e-12);
  // ...but resolving the (0.5, 0.05) datum as a single jump at chord speed,
  // though a weak solution, violates the entropy condition between the
  // states (the chord cuts through the graph near 0.225).
  SelfSimilarSolution bad;
  bad.spec = k2;
  bad.lambda = 0.5;
  bad.rho = 0.05;
  bad.breakpoints = {chord_slope(k2, 0.5, 0.05)};
  bad.segments = {Segment::constant(0.5), Segment::constant(0.05)};
  bad.discontinuities = {{chord_slope(k2, 0.5, 0.05), 0.5, 0.05,
                          DiscontinuityKind::shock}};
  CHECK(check_rankine_hugoniot(bad) <= 1e-15);
  const double viol = check_condition_E(bad, 1000);
  CHECK(viol > 1e-3);
  // The violation is visible already at v = 0.225.
  CHECK(chord_slope(k2, 0.5, 0.05) - chord_slope(k2, 0.225, 0.5) > 0.05);
  CHECK_THROWS_AS(check_condition_E(bad, 1), std::invalid_argument);
}

TEST_CASE("conservation: integral of the profile matches the flux balance") {
  testutil::Uniform u(13);
  for (int c = 1; c <= 6; ++c) {
    auto [lambda, rho] = sample_case(c, u);
    const SelfSimilarSolution sol = solve(pb(lambda, rho));
    const double a = -4.0, b = 2.0;  // outside every wave for k = 2
    // Integrate segment by segment so the quadrature never straddles a jump.
    std::vector<double> cuts = {a};
    for (double bp : sol.breakpoints) cuts.push_back(bp);
    cuts.push_back(b);
    double integral = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
      integral += testutil::adaptive_simpson(
          [&](double v) { return evaluate(sol, v, 1.0); }, cuts[i], cuts[i + 1],
          1e-12);
    const double expected =
        b * rho - a * lambda - flux(k2, rho) + flux(k2, lambda);
    CHECK(integral == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("envelope construction agrees with the six-case solver (k = 2)") {
  testutil::Uniform u(17);
  for (int c = 1; c <= 6; ++c) {
    for (int rep = 0; rep < 12; ++rep) {
      auto [lambda, rho] = sample_case(c, u);
      const SelfSimilarSolution a = solve(pb(lambda, rho));
      const SelfSimilarSolution b = solve_general_envelope(pb(lambda, rho));
      CHECK(b.case_label == a.case_label);
      double worst = 0.0;
      for (int i = 0; i <= 1000; ++i) {
        const double v = -4.0 + 6.0 * i / 1000.0;
        worst = std::max(worst, std::abs(evaluate(a, v, 1.0) - evaluate(b, v, 1.0)));
      }
      CAPTURE(c);
      CAPTURE(lambda);
      CAPTURE(rho);
      CHECK(worst <= 1e-10);
    }
  }
  // Degenerate datum.
  const SelfSimilarSolution sd = solve_general_envelope(pb(0.4, 0.4));
  CHECK(sd.segments.size() == 1);
  CHECK(evaluate(sd, 0.3, 1.0) == 0.4);
}

TEST_CASE("envelope construction is self-consistent for other k") {
  // k = 3 contact-type datum: both verifiers pass at 1e-10.
  const SelfSimilarSolution s3 = solve_general_envelope(pb(0.9, 0.02, 3));
  CHECK(check_rankine_hugoniot(s3) <= 1e-10);
  CHECK(check_condition_E(s3, 2000) <= 1e-10);
  CHECK(evaluate(s3, -100.0, 1.0) == doctest::Approx(0.9));
  CHECK(evaluate(s3, 100.0, 1.0) == doctest::Approx(0.02));

  // The six-case solver generalizes to k = 3 and must agree with the
  // envelope route there too.
  testutil::Uniform u(19);
  for (int rep = 0; rep < 40; ++rep) {
    const double lambda = u(0.0, 1.0), rho = u(0.0, 1.0);
    const auto infl = *inflection(FluxSpec::totally_asymmetric(3));
    if (std::abs(lambda - infl) < 1e-3 || std::abs(rho - infl) < 1e-3) continue;
    if (std::abs(lambda - rho) < 1e-3) continue;
    const SelfSimilarSolution a = solve(pb(lambda, rho, 3));
    const SelfSimilarSolution b = solve_general_envelope(pb(lambda, rho, 3));
    double worst = 0.0;
    for (int i = 0; i <= 500; ++i) {
      const double v = -7.0 + 9.0 * i / 500.0;
      worst = std::max(worst, std::abs(evaluate(a, v, 1.0) - evaluate(b, v, 1.0)));
    }
    CAPTURE(lambda);
    CAPTURE(rho);
    CHECK(worst <= 1e-8);
  }

  // k = 1: concave flux, classic two-shape picture.
  const SelfSimilarSolution shock1 = solve_general_envelope(pb(0.2, 0.7, 1));
  REQUIRE(shock1.discontinuities.size() == 1);
  CHECK(shock1.discontinuities[0].kind == DiscontinuityKind::shock);
  const SelfSimilarSolution fan1 = solve_general_envelope(pb(0.7, 0.2, 1));
  CHECK(fan1.discontinuities.empty());
  const SelfSimilarSolution fan1b = solve(pb(0.7, 0.2, 1));
  for (int i = 0; i <= 200; ++i) {
    const double v = -1.5 + 3.0 * i / 200.0;
    CHECK(evaluate(fan1, v, 1.0) == doctest::Approx(evaluate(fan1b, v, 1.0)).epsilon(1e-10));
  }
}

TEST_CASE("fan segments invert the characteristic speed pointwise") {
  const SelfSimilarSolution sol = solve(pb(0.5, 0.05));
  for (double v = 0.51; v < 1.146; v += 0.01) {
    const double val = evaluate(sol, v, 1.0);
    CHECK(characteristic_speed(k2, val) == doctest::Approx(v).epsilon(1e-12));
  }
}
