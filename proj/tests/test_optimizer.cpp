#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "retopt/optimizer.hpp"
#include "support/test_support.hpp"

using retopt::DescentOptions;
using retopt::Disutility;
using retopt::ExpectedLossFunction;
using retopt::OptimizeMethod;
using retopt::Perturbation;
using retopt::PolicyTerms;
using retopt::Retention;
using retopt::SeverityDomain;

namespace {

ExpectedLossFunction unit_density(double x_max = 1.0) {
  return ExpectedLossFunction::piecewise_constant({0.0, x_max}, {1.0});
}

std::vector<double> uniform_edges(double x_max, int cells) {
  std::vector<double> edges;
  for (int i = 0; i <= cells; ++i) edges.push_back(x_max * i / cells);
  return edges;
}

// Smooth bump on [lo, hi], zero outside, with zero derivative at the ends.
Perturbation bump(double lo, double hi) {
  Perturbation dr;
  dr.support_lo = lo;
  dr.support_hi = hi;
  dr.breakpoints = {lo, hi};
  dr.fn = [lo, hi](double x) {
    if (x <= lo || x >= hi) return 0.0;
    const double t = (x - lo) / (hi - lo);
    const double s = std::sin(M_PI * t);
    return s * s;
  };
  return dr;
}

// Closed-form premium and value of the straight deductible d under f == 1 on
// ]0, x_max]: with w = x_max - d,
//   premium = (1+c) w^2 / 2
//   value   = (1+c) (rho^2 expm1(w/rho) - rho w - w^2 / 2)
std::pair<double, double> flat_oracle(double x_max, double d, double c, double rho) {
  const double w = x_max - d;
  const double p = (1.0 + c) * 0.5 * w * w;
  const double v = (1.0 + c) * (rho * rho * std::expm1(w / rho) - rho * w - 0.5 * w * w);
  return {p, v};
}

}  // namespace

TEST_CASE("objective at the endpoints") {
  const auto f = unit_density();
  const auto u = Disutility::exponential(1.0);
  // r = 0: A = rho * expected count
  CHECK(retopt::objective_A(f, Retention::zero(), PolicyTerms(0.1), u) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // r = x: A = integral of (e^x - 1.1 x) = e - 1 - 0.55
  CHECK(retopt::objective_A(f, Retention::identity(), PolicyTerms(0.1), u) ==
        doctest::Approx(std::exp(1.0) - 1.0 - 0.55).epsilon(1e-12));
  CHECK_THROWS_AS(
      retopt::objective_A(f, Retention::zero(), PolicyTerms(0.1), Disutility::risk_neutral()),
      std::invalid_argument);
}

TEST_CASE("first variation vanishes at the closed-form optimum") {
  const auto f = unit_density();
  const auto u = Disutility::exponential(1.0);
  const PolicyTerms terms(0.5);
  const double d = std::log1p(terms.loading_c);
  const auto r = Retention::straight_deductible(d);
  // support strictly above d, where r is interior
  const auto dr = bump(d + 0.05, 0.95);
  CHECK(std::fabs(retopt::first_variation(f, r, terms, u, dr)) <= 1e-10);
  // identically-zero direction
  auto zero_dir = bump(d + 0.05, 0.95);
  zero_dir.fn = [](double) { return 0.0; };
  CHECK(retopt::first_variation(f, r, terms, u, zero_dir) == doctest::Approx(0.0));
}

TEST_CASE("first variation has the right sign off the optimum") {
  const auto f = unit_density();
  const auto u = Disutility::exponential(1.0);
  const PolicyTerms terms(0.5);
  const double d = std::log1p(terms.loading_c);
  // retention below the optimal plateau: raising it should lower A
  const auto low = Retention::straight_deductible(0.5 * d);
  CHECK(retopt::first_variation(f, low, terms, u, bump(0.5 * d + 0.02, 0.9)) < 0.0);
  // retention above it: raising it further should raise A
  const auto high = Retention::straight_deductible(2.0 * d);
  CHECK(retopt::first_variation(f, high, terms, u, bump(2.0 * d + 0.02, 0.98)) > 0.0);
}

TEST_CASE("first variation rejects non-interior support") {
  const auto f = unit_density();
  const auto u = Disutility::exponential(1.0);
  const PolicyTerms terms(0.5);
  const auto r = Retention::straight_deductible(0.4);
  // support includes x < 0.4 where r(x) = x sits on the boundary
  CHECK_THROWS_AS(retopt::first_variation(f, r, terms, u, bump(0.2, 0.8)),
                  std::invalid_argument);
  // r = 0 is never interior
  CHECK_THROWS_AS(retopt::first_variation(f, Retention::zero(), terms, u, bump(0.3, 0.7)),
                  std::invalid_argument);
}

TEST_CASE("finite-difference check of the first variation, with O(eps^2) decay") {
  retopt::Xoshiro256pp rng(17, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = testsupport::random_loss_function(rng, 1.0);
    const auto u = Disutility::exponential(testsupport::uniform_in(rng, 0.5, 3.0));
    const PolicyTerms terms(testsupport::uniform_in(rng, -0.3, 1.0));
    const double d = testsupport::uniform_in(rng, 0.1, 0.5);
    const auto r = Retention::straight_deductible(d);
    const auto dr = bump(d + 0.05, 0.95);
    const double analytic = retopt::first_variation(f, r, terms, u, dr);
    const double fd4 = retopt::first_variation_fd(f, r, terms, u, dr, 1e-4);
    const double fd5 = retopt::first_variation_fd(f, r, terms, u, dr, 1e-5);
    const double err4 = std::fabs(fd4 - analytic);
    const double err5 = std::fabs(fd5 - analytic);
    CHECK(err4 <= 1e-6 * (1.0 + std::fabs(analytic)));
    // central differences are second order: shrinking eps tenfold should
    // shrink the error by about a hundredfold
    CHECK(err5 <= err4 / 50.0 + 1e-15);
  }
}

TEST_CASE("closed-form optimum") {
  const auto u = Disutility::exponential(100.0);
  const SeverityDomain domain(500.0);
  const auto res = retopt::optimal_retention_closed_form(PolicyTerms(0.1), u, domain);
  CHECK(res.deductible == doctest::Approx(9.531017980432486).epsilon(1e-15));
  CHECK(res.deductible == 100.0 * std::log1p(0.1));
  CHECK(res.method == OptimizeMethod::ClosedForm);
  CHECK(res.retention.kind() == Retention::Kind::StraightDeductible);
  CHECK_FALSE(res.insures_nothing);
  CHECK(std::isnan(res.objective));  // value columns need a concrete f

  // c <= 0: full coverage is optimal
  for (double c : {0.0, -0.05, -0.5}) {
    const auto r = retopt::optimal_retention_closed_form(PolicyTerms(c), u, domain);
    CHECK(r.deductible == 0.0);
  }

  // deductible beyond the domain: the policy insures nothing
  const auto tiny = retopt::optimal_retention_closed_form(
      PolicyTerms(10.0), Disutility::exponential(100.0), SeverityDomain(100.0));
  CHECK(tiny.insures_nothing);
  CHECK(tiny.deductible >= 100.0);
}

TEST_CASE("discrete per-cell optimum on the worked grid") {
  // rho = 1, c = e - 1, so the plateau level is exactly 1
  const auto f = unit_density(2.0);
  const auto u = Disutility::exponential(1.0);
  const PolicyTerms terms(std::exp(1.0) - 1.0);
  const auto res = retopt::optimal_retention_discrete(f, uniform_edges(2.0, 8), terms, u);
  const std::vector<double> expected{0.0, 0.25, 0.5, 0.75, 1.0, 1.0, 1.0, 1.0};
  REQUIRE(res.retention.kind() == Retention::Kind::StepWise);
  REQUIRE(res.retention.levels().size() == expected.size());
  for (std::size_t j = 0; j < expected.size(); ++j) {
    CHECK(res.retention.levels()[j] == doctest::Approx(expected[j]).epsilon(1e-14));
  }
  CHECK(res.deductible == std::log1p(terms.loading_c));
  CHECK_FALSE(std::isnan(res.objective));
  CHECK_FALSE(std::isnan(res.value));

  // c <= 0: every level is zero
  const auto full = retopt::optimal_retention_discrete(f, uniform_edges(2.0, 8),
                                                       PolicyTerms(-0.1), u);
  for (double level : full.retention.levels()) CHECK(level == 0.0);
}

TEST_CASE("discrete objective converges to the closed-form objective on refinement") {
  const auto f = unit_density();
  const auto u = Disutility::exponential(1.0);
  const PolicyTerms terms(0.4);
  const auto exact = Retention::straight_deductible(std::log1p(0.4));
  const double a_star = retopt::objective_A(f, exact, terms, u);
  double prev_gap = 0.0;
  for (int k = 0; k < 4; ++k) {
    const int cells = 64 << k;
    const auto res = retopt::optimal_retention_discrete(f, uniform_edges(1.0, cells), terms, u);
    const double gap = res.objective - a_star;
    CHECK(gap >= -1e-12);  // the step-wise iterate can never beat the optimum
    if (k > 0) CHECK(gap <= 0.66 * prev_gap + 1e-13);
    prev_gap = gap;
  }
}

TEST_CASE("descent matches a brute-force per-cell scan") {
  retopt::Xoshiro256pp rng(55, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const double x_max = testsupport::uniform_in(rng, 0.8, 2.0);
    const auto f = testsupport::random_loss_function(rng, x_max);
    const auto u = Disutility::exponential(testsupport::uniform_in(rng, 0.4, 2.0));
    const PolicyTerms terms(testsupport::uniform_in(rng, 0.05, 1.5));
    const auto edges = uniform_edges(x_max, 16);
    const auto res = retopt::optimal_retention_descent(f, edges, terms, u);
    REQUIRE(res.converged);
    const double rho = u.rho();
    for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
      // scan the cell objective g(k) = rho e^{k/rho} - (1+c) k on [0, edge_j]
      const double cap = edges[j];
      double best_k = 0.0, best_g = rho;
      for (int i = 0; i <= 4000; ++i) {
        const double k = cap * i / 4000.0;
        const double g = rho * std::exp(k / rho) - (1.0 + terms.loading_c) * k;
        if (g < best_g) {
          best_g = g;
          best_k = k;
        }
      }
      CHECK(res.retention.levels()[j] == doctest::Approx(best_k).epsilon(5e-4).scale(1.0));
    }
  }
}

TEST_CASE("descent agrees with the discrete minimizer and descends monotonically") {
  const auto f = unit_density(2.0);
  const auto u = Disutility::exponential(1.0);
  const PolicyTerms terms(std::exp(1.0) - 1.0);
  const auto edges = uniform_edges(2.0, 8);
  const auto direct = retopt::optimal_retention_discrete(f, edges, terms, u);
  const auto iter = retopt::optimal_retention_descent(f, edges, terms, u);
  REQUIRE(iter.converged);
  CHECK(iter.iterations_used > 0);
  CHECK(iter.residual <= 1e-10);
  for (std::size_t j = 0; j < direct.retention.levels().size(); ++j) {
    CHECK(iter.retention.levels()[j] ==
          doctest::Approx(direct.retention.levels()[j]).epsilon(1e-9).scale(1.0));
  }
  CHECK(iter.objective == doctest::Approx(direct.objective).epsilon(1e-10));
  REQUIRE(iter.objective_trace.size() >= 2);
  for (std::size_t i = 1; i < iter.objective_trace.size(); ++i) {
    CHECK(iter.objective_trace[i] <= iter.objective_trace[i - 1] + 1e-12);
  }
  // a starved iteration budget is reported, not silently accepted
  DescentOptions tight;
  tight.iterations = 1;
  const auto starved = retopt::optimal_retention_descent(f, edges, terms, u, tight);
  CHECK_FALSE(starved.converged);
}

TEST_CASE("optimal premium and value against the flat-density closed form") {
  const auto u = Disutility::exponential(1.0);
  const PolicyTerms terms(0.1);
  const auto f = unit_density();
  const double d = std::log1p(0.1);
  const auto [p, v] = retopt::optimal_premium_and_value(f, terms, u);
  const auto [p_ref, v_ref] = flat_oracle(1.0, d, 0.1, 1.0);
  CHECK(p == doctest::Approx(p_ref).epsilon(1e-12));
  CHECK(v == doctest::Approx(v_ref).epsilon(1e-12));

  // consistency with the generic policy evaluation of the same retention
  const auto ev = retopt::policy_value(f, Retention::straight_deductible(d), terms, u);
  CHECK(p == doctest::Approx(ev.premium).epsilon(1e-11));
  CHECK(v == doctest::Approx(ev.value).epsilon(1e-9).scale(1.0));

  // degenerate: deductible at or past x_max
  const auto [p0, v0] = retopt::optimal_premium_and_value(
      f, PolicyTerms(10.0), Disutility::exponential(1.0));
  CHECK(p0 == 0.0);
  CHECK(v0 == 0.0);

  CHECK_THROWS_AS(retopt::optimal_premium_and_value(f, PolicyTerms(0.0), u),
                  std::invalid_argument);
}

TEST_CASE("the closed-form optimum Pareto-dominates sampled alternatives") {
  const auto f = unit_density();
  const auto u = Disutility::exponential(1.0);
  const PolicyTerms terms(0.3);
  const auto [p_star, v_star] = retopt::optimal_premium_and_value(f, terms, u);
  (void)p_star;
  retopt::Xoshiro256pp rng(66, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto r = testsupport::random_retention(rng, 1.0);
    CHECK(retopt::policy_value(f, r, terms, u).value <= v_star + 1e-9);
  }
}

TEST_CASE("the optimal deductible does not depend on the loss function") {
  const auto u = Disutility::exponential(0.7);
  const PolicyTerms terms(0.25);
  const auto edges = uniform_edges(1.5, 12);
  const auto f1 = unit_density(1.5);
  const auto f2 = ExpectedLossFunction::exponential(2.0, 0.3, 1.5);
  const auto d1 = retopt::optimal_retention_discrete(f1, edges, terms, u);
  const auto d2 = retopt::optimal_retention_discrete(f2, edges, terms, u);
  for (std::size_t j = 0; j < d1.retention.levels().size(); ++j) {
    CHECK(d1.retention.levels()[j] == d2.retention.levels()[j]);  // bit-identical
  }
  CHECK(d1.deductible == d2.deductible);
  const auto cf = retopt::optimal_retention_closed_form(terms, u, f1.domain());
  CHECK(d1.deductible == cf.deductible);  // the same double, no f involved
}
