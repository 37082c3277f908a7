#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "retopt/coverage.hpp"
#include "retopt/disutility.hpp"
#include "retopt/loss_model.hpp"
#include "retopt/valuation.hpp"

namespace retopt {

enum class OptimizeMethod { ClosedForm, DiscreteCells, ProjectedDescent };

struct OptimizationResult {
  Retention retention = Retention::zero();
  double deductible = 0.0;  // 0 when c <= 0
  OptimizeMethod method = OptimizeMethod::ClosedForm;

  // Value columns; NaN until evaluate_result is applied (the closed form
  // needs no f, so it cannot fill these itself).
  double objective = std::numeric_limits<double>::quiet_NaN();
  double premium = std::numeric_limits<double>::quiet_NaN();
  double value = std::numeric_limits<double>::quiet_NaN();

  bool insures_nothing = false;  // deductible >= x_max

  // descent diagnostics
  bool converged = true;
  int iterations_used = 0;
  double residual = 0.0;
  std::vector<double> objective_trace;
};

// The functional to minimize:
// A = rho * integral of f(x) * (e^{r(x)/rho} - (1+c) r(x)/rho).
// Requires finite rho.
double objective_A(const ExpectedLossFunction& f, const Retention& r,
                   const PolicyTerms& terms, const Disutility& u, double abs_tol = 1e-10);

// Bounded perturbation of the retention, supported where r is interior
// (0 < r(x) < x); breakpoints of fn must be declared.
struct Perturbation {
  std::function<double(double)> fn;
  std::vector<double> breakpoints;
  double support_lo = 0.0;
  double support_hi = 0.0;
};

// First variation of A in direction dr:
// integral of f * (e^{r/rho} - (1+c)) * dr over the support.
// Rejects perturbations whose support touches non-interior r.
double first_variation(const ExpectedLossFunction& f, const Retention& r,
                       const PolicyTerms& terms, const Disutility& u,
                       const Perturbation& dr, double abs_tol = 1e-12);

// Central finite difference (A(r + eps dr) - A(r - eps dr)) / (2 eps),
// evaluated as a single quadrature of the difference integrand so the two
// A-values share every node and cancellation noise drops out.
double first_variation_fd(const ExpectedLossFunction& f, const Retention& r,
                          const PolicyTerms& terms, const Disutility& u,
                          const Perturbation& dr, double eps, double abs_tol = 1e-13);

// Straight deductible rho*ln(1+c) for c > 0, full coverage for c <= 0.
// Independent of the expected loss function by construction.
OptimizationResult optimal_retention_closed_form(const PolicyTerms& terms,
                                                 const Disutility& u,
                                                 const SeverityDomain& domain);

// Per-cell minimization over step-wise retentions on the given partition:
// level_j = min(lower edge, rho*ln(1+c)) for c > 0, all zero for c <= 0.
OptimizationResult optimal_retention_discrete(const ExpectedLossFunction& f,
                                              const std::vector<double>& grid_edges,
                                              const PolicyTerms& terms,
                                              const Disutility& u);

struct DescentOptions {
  int iterations = 500;
  double step = 0.0;  // <= 0 means the default rho/(1+c)
  double level_tol = 0.0;  // <= 0 means 1e-15 * (1 + rho)
};

// Independent numerical route: projected per-cell gradient descent with
// backtracking on the separable objective. Monotone non-increasing trace;
// an exhausted iteration budget is reported through converged/residual.
OptimizationResult optimal_retention_descent(const ExpectedLossFunction& f,
                                             const std::vector<double>& grid_edges,
                                             const PolicyTerms& terms, const Disutility& u,
                                             const DescentOptions& opts = {});

// Premium and value of the closed-form optimum, by the post-optimization
// integrals over [deductible, x_max]. Requires c > 0; a deductible at or
// beyond x_max yields (0, 0).
std::pair<double, double> optimal_premium_and_value(const ExpectedLossFunction& f,
                                                    const PolicyTerms& terms,
                                                    const Disutility& u,
                                                    double abs_tol = 1e-10);

// Fills objective/premium/value of a result for a concrete f.
void evaluate_result(const ExpectedLossFunction& f, const PolicyTerms& terms,
                     const Disutility& u, OptimizationResult& result,
                     double abs_tol = 1e-10);

const char* to_string(OptimizeMethod method);

}  // namespace retopt
