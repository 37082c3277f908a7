#include "retopt/valuation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "retopt/errors.hpp"
#include "retopt/quadrature.hpp"

namespace retopt {

PolicyTerms::PolicyTerms(double c) : loading_c(c) {
  if (!(std::isfinite(c) && c > -1.0)) {
    throw std::invalid_argument("PolicyTerms: loading_c must be finite and > -1");
  }
}

namespace {

std::vector<double> merged_breakpoints(const ExpectedLossFunction& f, const Retention& r) {
  std::vector<double> pts = r.breakpoints(f.x_max());
  const auto& fb = f.breakpoints();
  pts.insert(pts.end(), fb.begin(), fb.end());
  return pts;
}

double expected_indemnity(const ExpectedLossFunction& f, const Retention& r,
                          double abs_tol) {
  const auto breaks = merged_breakpoints(f, r);
  return integrate([&](double x) { return f(x) * (x - r(x)); }, 0.0, f.x_max(), abs_tol,
                   breaks)
      .value;
}

}  // namespace

double premium(const ExpectedLossFunction& f, const Retention& r, const PolicyTerms& terms,
               double abs_tol) {
  return (1.0 + terms.loading_c) * expected_indemnity(f, r, abs_tol);
}

double ce_total_loss(const ExpectedLossFunction& f, const Disutility& u, double abs_tol) {
  if (u.is_risk_neutral()) return expected_total_loss(f, abs_tol);
  const double rho = u.rho();
  if (f.x_max() / rho > 700.0) {
    throw EvaluationError("ce_total_loss: x_max/rho = " + std::to_string(f.x_max() / rho) +
                          " overflows the exponential moment");
  }
  return rho * integrate([&](double x) { return f(x) * std::expm1(x / rho); }, 0.0,
                         f.x_max(), abs_tol, f.breakpoints())
                   .value;
}

double ce_retained_plus_premium(const ExpectedLossFunction& f, const Retention& r,
                                double premium_p, const Disutility& u, double abs_tol) {
  const auto breaks = merged_breakpoints(f, r);
  if (u.is_risk_neutral()) {
    return premium_p + integrate([&](double x) { return f(x) * r(x); }, 0.0, f.x_max(),
                                 abs_tol, breaks)
                           .value;
  }
  const double rho = u.rho();
  if (f.x_max() / rho > 700.0) {
    throw EvaluationError("ce_retained_plus_premium: x_max/rho overflows");
  }
  return premium_p + rho * integrate([&](double x) { return f(x) * std::expm1(r(x) / rho); },
                                     0.0, f.x_max(), abs_tol, breaks)
                               .value;
}

PolicyEvaluation policy_value(const ExpectedLossFunction& f, const Retention& r,
                              const PolicyTerms& terms, const Disutility& u,
                              double abs_tol) {
  PolicyEvaluation out;
  out.premium = premium(f, r, terms, abs_tol);
  out.ce_loss = ce_total_loss(f, u, abs_tol);

  if (u.is_risk_neutral()) {
    // hard-coded rho -> infinity limit: value = -c * <I>
    out.value = -terms.loading_c * expected_indemnity(f, r, abs_tol);
    out.ce_retained_plus_premium = out.ce_loss - out.value;
    return out;
  }

  out.ce_retained_plus_premium = ce_retained_plus_premium(f, r, out.premium, u, abs_tol);
  out.value = out.ce_loss - out.ce_retained_plus_premium;

  // single-integral route; rho*(e^{x/rho} - e^{r/rho}) written through expm1
  // of the increment to avoid cancellation for small (x - r)/rho
  const double rho = u.rho();
  const double c = terms.loading_c;
  const auto breaks = merged_breakpoints(f, r);
  const double direct =
      integrate(
          [&](double x) {
            const double ret = r(x);
            return f(x) * (rho * std::exp(ret / rho) * std::expm1((x - ret) / rho) -
                           (1.0 + c) * (x - ret));
          },
          0.0, f.x_max(), abs_tol, breaks)
          .value;
  if (std::fabs(direct - out.value) > 1e-9 * (1.0 + std::fabs(out.value))) {
    throw EvaluationError("policy_value: CE-difference and single-integral routes disagree (" +
                          std::to_string(out.value) + " vs " + std::to_string(direct) + ")");
  }
  return out;
}

double breakeven_loading(const ExpectedLossFunction& f, const Retention& r,
                         const Disutility& u, double abs_tol) {
  if (u.is_risk_neutral()) {
    throw std::invalid_argument("breakeven_loading: requires exponential disutility");
  }
  const double rho = u.rho();
  const double indemnity = expected_indemnity(f, r, abs_tol);
  if (!(indemnity > abs_tol)) {
    throw std::invalid_argument(
        "breakeven_loading: expected indemnity is zero, no insurance to break even on");
  }
  const auto breaks = merged_breakpoints(f, r);
  const double gap = integrate(
                         [&](double x) {
                           const double ret = r(x);
                           return f(x) * rho * std::exp(ret / rho) *
                                  std::expm1((x - ret) / rho);
                         },
                         0.0, f.x_max(), abs_tol, breaks)
                         .value;
  return gap / indemnity - 1.0;
}

}  // namespace retopt
