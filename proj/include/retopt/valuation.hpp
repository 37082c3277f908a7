#pragma once

#include "retopt/coverage.hpp"
#include "retopt/disutility.hpp"
#include "retopt/loss_model.hpp"

namespace retopt {

struct PolicyTerms {
  double loading_c;  // premium = (1 + c) * expected indemnity; requires c > -1
  explicit PolicyTerms(double c);
};

struct PolicyEvaluation {
  double premium = 0.0;
  double ce_loss = 0.0;
  double ce_retained_plus_premium = 0.0;
  double value = 0.0;  // ce_loss - ce_retained_plus_premium, exactly
};

// (1 + c) * integral of f(x) * (x - r(x)), breakpoint-aware.
double premium(const ExpectedLossFunction& f, const Retention& r, const PolicyTerms& terms,
               double abs_tol = 1e-10);

// CE of the yearly total loss: rho * integral of f(x) * expm1(x/rho);
// risk-neutral variant returns the expected total loss.
double ce_total_loss(const ExpectedLossFunction& f, const Disutility& u,
                     double abs_tol = 1e-10);

// P + rho * integral of f(x) * expm1(r(x)/rho); risk-neutral variant returns
// P + expected retained total.
double ce_retained_plus_premium(const ExpectedLossFunction& f, const Retention& r,
                                double premium_p, const Disutility& u,
                                double abs_tol = 1e-10);

// Policy value for the insured. The CE-difference route is cross-checked
// internally against the single-integral route to 1e-9 relative; a mismatch
// raises EvaluationError. The risk-neutral branch computes
// value = -c * expected indemnity directly.
PolicyEvaluation policy_value(const ExpectedLossFunction& f, const Retention& r,
                              const PolicyTerms& terms, const Disutility& u,
                              double abs_tol = 1e-10);

// Break-even loading: the c at which the policy value crosses zero for the
// given retention. Requires exponential disutility and positive expected
// indemnity; always > 0.
double breakeven_loading(const ExpectedLossFunction& f, const Retention& r,
                         const Disutility& u, double abs_tol = 1e-10);

}  // namespace retopt
