#include <cmath>

#include "doctest.h"
#include "slitflow/errors.hpp"
#include "slitflow/radial.hpp"

using namespace slitflow;
using doctest::Approx;

TEST_CASE("radial right-hand side") {
  SUBCASE("zero state") {
    CHECK(radial_rhs({3.0, 0.0, 0.0}, {0.9, 0.4}) == Complex(0.0, 0.0));
  }
  SUBCASE("linear limit at r = 10") {
    const Complex fpp = radial_rhs({10.0, 1.0, 0.0}, {1.0, 0.0});
    CHECK(fpp.real() == Approx(-0.0025).epsilon(1e-15));
    CHECK(fpp.imag() == 0.0);
  }
  SUBCASE("vanishes far out") {
    CHECK(std::abs(radial_rhs({1e8, 1.0, 0.0}, {1.0, 0.0})) < 1e-16);
  }
  SUBCASE("bracket is exactly 1/(4 r^2) for k = kappa, no nonlinearity") {
    for (double r : {0.3, 7.0, 250.0}) CHECK(radial_bracket(r, 5.0, {1.0, 0.0}) == 0.25 / (r * r));
  }
  SUBCASE("homogeneous of degree one without nonlinearity") {
    const RadialState s{12.0, {0.4, 0.1}, {-0.2, 0.3}};
    const RadialState d{12.0, 2.0 * s.f, 2.0 * s.f_prime};
    CHECK(std::abs(radial_rhs(d, {0.93, 0.0}) - 2.0 * radial_rhs(s, {0.93, 0.0})) < 1e-15);
  }
  SUBCASE("first-derivative coupling") {
    const Complex fpp = radial_rhs({1e9, 0.0, {0.0, 1.0}}, {1.0, 0.0});
    CHECK(fpp == Complex(2.0, 0.0));
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(radial_rhs({0.0, 1.0, 0.0}, {1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(radial_rhs({-1.0, 1.0, 0.0}, {1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(radial_rhs({1.0, 1.0, 0.0}, {1.2, 0.0}), DomainError);
    CHECK_THROWS_AS(radial_rhs({1.0, 1.0, 0.0}, {0.0, 0.0}), DomainError);
  }
}

TEST_CASE("flatness metric") {
  RadialSolution sol;
  CHECK_THROWS_AS(flatness_metric(sol), TooShortError);
  sol.samples = {{1.0, 1.0, 0.0}, {2.0, {0.0, 1.0}, 0.0}};
  CHECK(flatness_metric(sol) == 0.0);
  sol.samples = {{1.0, 1.1, 0.0}, {2.0, 1.1, 0.0}};
  CHECK(flatness_metric(sol) == Approx(0.1));
}

TEST_CASE("solve_radial in the linear limit") {
  const auto sol = solve_radial(200.0, {1.0, 0.0}, {10.0, 1.0, 0.0});
  CHECK(sol.samples.size() == RadialConfig{}.samples);
  CHECK(sol.samples.front().r_tilde == 10.0);
  CHECK(sol.samples.back().r_tilde == 200.0);
  for (std::size_t i = 1; i < sol.samples.size(); ++i) {
    CHECK(sol.samples[i].r_tilde > sol.samples[i - 1].r_tilde);
  }
  CHECK(sol.flatness <= 0.01);
  CHECK(sol.flatness > 0.0);

  RadialConfig fine;
  fine.rel_tol /= 2;
  fine.abs_tol /= 2;
  const auto halved = solve_radial(200.0, {1.0, 0.0}, {10.0, 1.0, 0.0}, fine);
  CHECK(std::abs(halved.flatness - sol.flatness) < 1e-4);
}

TEST_CASE("flatness falls as k approaches kappa") {
  double prev = 1e300;
  for (double q : {0.90, 0.95, 0.99}) {
    const auto sol = solve_radial(200.0, {q, 0.05}, {20.0, 1.0, 0.0});
    CHECK(sol.flatness < prev);
    prev = sol.flatness;
  }
}

TEST_CASE("solve_radial edge cases") {
  const auto single = solve_radial(10.0, {1.0, 0.0}, {10.0, {1.2, 0.0}, 0.0});
  CHECK(single.samples.size() == 1);
  CHECK(single.flatness == Approx(0.2));
  CHECK_THROWS_AS(solve_radial(5.0, {1.0, 0.0}, {10.0, 1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(solve_radial(20.0, {1.0, 0.0}, {0.0, 1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(solve_radial(20.0, {1.5, 0.0}, {10.0, 1.0, 0.0}), DomainError);

  // Strong focusing nonlinearity blows up; the solver reports it.
  RadialConfig cfg;
  cfg.max_step = 1.0;
  CHECK_THROWS_AS(solve_radial(1e6, {1.0, -1e6}, {1.0, 1.0, 0.0}, cfg), StepFailureError);
}
