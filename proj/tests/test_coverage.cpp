#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "retopt/coverage.hpp"
#include "retopt/rng.hpp"
#include "support/test_support.hpp"

using retopt::Retention;

TEST_CASE("straight deductible") {
  const auto r = Retention::straight_deductible(0.2);
  CHECK(r(0.1) == 0.1);
  CHECK(r(0.5) == 0.2);
  CHECK(r.indemnity(0.5) == doctest::Approx(0.3));
  CHECK(r.breakpoints() == std::vector<double>{0.2});
}

TEST_CASE("zero, identity and proportional") {
  CHECK(Retention::zero().indemnity(0.7) == 0.7);
  CHECK(Retention::identity().indemnity(0.42) == 0.0);
  CHECK(Retention::proportional(0.3)(1.0) == doctest::Approx(0.3));
  CHECK(Retention::proportional(0.3).breakpoints().empty());
}

TEST_CASE("deductible with limit caps the indemnity") {
  const auto r = Retention::deductible_with_limit(0.2, 0.8);
  CHECK(r(0.1) == 0.1);
  CHECK(r(0.5) == 0.2);
  CHECK(r(0.8) == 0.2);
  CHECK(r(1.0) == doctest::Approx(0.4));        // indemnity stays at 0.6
  CHECK(r.indemnity(1.5) == doctest::Approx(0.6));
  CHECK(r.breakpoints() == std::vector<double>{0.2, 0.8});
}

TEST_CASE("step-wise retention uses half-open cells") {
  const auto r = Retention::step_wise({0.0, 0.5, 1.0}, {0.0, 0.4});
  CHECK(r(0.5) == 0.0);  // breakpoint belongs to the left cell
  CHECK(r(0.50001) == 0.4);
  CHECK(r(1.0) == 0.4);
  CHECK(r.breakpoints() == std::vector<double>{0.5});
  CHECK_THROWS_AS(r(1.5), std::invalid_argument);
}

TEST_CASE("step-wise construction rejects infeasible levels") {
  CHECK_THROWS_AS(Retention::step_wise({0.0, 0.5, 1.0}, {0.0, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(Retention::step_wise({0.0, 0.5, 1.0}, {0.1, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(Retention::step_wise({0.0, 0.5, 1.0}, {0.0, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(Retention::step_wise({0.1, 0.5}, {0.0}), std::invalid_argument);
}

TEST_CASE("x outside the domain is rejected") {
  CHECK_THROWS_AS(Retention::zero()(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Retention::identity()(-1.0), std::invalid_argument);
}

TEST_CASE("feasibility and complementarity over the random catalog") {
  retopt::Xoshiro256pp rng(17, 3);
  const double x_max = 2.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = testsupport::random_retention(rng, x_max);
    for (int i = 1; i <= 400; ++i) {
      const double x = x_max * i / 400.0;
      const double ret = r(x);
      CHECK(ret >= 0.0);
      CHECK(ret <= x);
      CHECK(r.indemnity(x) == x - ret);  // exact complement, no extra rounding
    }
    for (double bp : r.breakpoints(x_max)) {
      CHECK(r(bp) >= 0.0);
      CHECK(r(bp) <= bp);
    }
  }
}
