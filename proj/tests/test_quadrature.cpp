#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "retopt/errors.hpp"
#include "retopt/quadrature.hpp"

using retopt::integrate;

TEST_CASE("closed forms on smooth integrands") {
  const auto r1 = integrate([](double x) { return std::exp(x) - 1.0; }, 0.0, 1.0, 1e-12);
  CHECK(r1.value == doctest::Approx(std::exp(1.0) - 2.0).epsilon(1e-13));

  const auto r2 = integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-13));

  const auto r3 = integrate([](double x) { return x * x * x; }, -1.0, 2.0, 1e-12);
  CHECK(r3.value == doctest::Approx(15.0 / 4.0).epsilon(1e-13));
}

TEST_CASE("empty interval integrates to zero") {
  const auto r = integrate([](double) { return 1.0; }, 0.7, 0.7, 1e-12);
  CHECK(r.value == 0.0);
}

TEST_CASE("kinked integrand with declared breakpoint") {
  const std::vector<double> bp{0.5};
  const auto r = integrate([](double x) { return std::fabs(x - 0.5); }, 0.0, 1.0, 1e-13, bp);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("jump integrand split at the jump") {
  const std::vector<double> bp{0.3};
  const auto r =
      integrate([](double x) { return x <= 0.3 ? 1.0 : 2.0; }, 0.0, 1.0, 1e-13, bp);
  CHECK(r.value == doctest::Approx(0.3 + 1.4).epsilon(1e-14));
}

TEST_CASE("error estimate bounds the true error on a test battery") {
  struct Case {
    std::function<double(double)> g;
    double a, b, exact;
  };
  const std::vector<Case> battery = {
      {[](double x) { return std::exp(x); }, 0.0, 3.0, std::exp(3.0) - 1.0},
      {[](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0, M_PI / 4.0},
      {[](double x) { return std::sqrt(x); }, 0.0, 1.0, 2.0 / 3.0},
  };
  for (const auto& c : battery) {
    const auto r = integrate(c.g, c.a, c.b, 1e-10);
    CHECK(std::fabs(r.value - c.exact) <= std::max(r.error, 1e-10) + 1e-13);
  }
}

TEST_CASE("tightening the tolerance does not move converged results") {
  const auto coarse = integrate([](double x) { return std::cos(10.0 * x); }, 0.0, 2.0, 1e-8);
  const auto fine = integrate([](double x) { return std::cos(10.0 * x); }, 0.0, 2.0, 1e-14);
  CHECK(std::fabs(coarse.value - fine.value) <= std::max(coarse.error, 1e-8));
}

TEST_CASE("non-finite integrand is reported with the abscissa") {
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / (x - 0.5); }, 0.0, 1.0, 1e-10),
                  retopt::EvaluationError);
}

TEST_CASE("invalid interval rejected") {
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0, 1e-10),
                  retopt::EvaluationError);
}
