#include "retopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "retopt/errors.hpp"
#include "retopt/quadrature.hpp"

namespace retopt {

namespace {

double require_rho(const Disutility& u, const char* where) {
  if (u.is_risk_neutral()) {
    throw std::invalid_argument(std::string(where) + ": requires finite risk tolerance");
  }
  return u.rho();
}

std::vector<double> merged_breakpoints(const ExpectedLossFunction& f, const Retention& r,
                                       std::span<const double> extra = {}) {
  std::vector<double> pts = r.breakpoints(f.x_max());
  const auto& fb = f.breakpoints();
  pts.insert(pts.end(), fb.begin(), fb.end());
  pts.insert(pts.end(), extra.begin(), extra.end());
  return pts;
}

void check_grid(const std::vector<double>& edges, const ExpectedLossFunction& f) {
  if (edges.size() < 2 || edges.front() != 0.0 || edges.back() != f.x_max()) {
    throw std::invalid_argument("optimizer: grid must partition ]0, x_max]");
  }
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i] < edges[i + 1])) {
      throw std::invalid_argument("optimizer: grid edges must be strictly ascending");
    }
  }
}

void check_perturbation_support(const ExpectedLossFunction& f, const Retention& r,
                                const Perturbation& dr) {
  if (!(dr.support_lo >= 0.0 && dr.support_lo < dr.support_hi &&
        dr.support_hi <= f.x_max())) {
    throw std::invalid_argument("first_variation: bad perturbation support");
  }
  // dense sample plus the declared breakpoints
  std::vector<double> probes(dr.breakpoints);
  const int n = 512;
  for (int i = 0; i <= n; ++i) {
    probes.push_back(dr.support_lo + (dr.support_hi - dr.support_lo) * i / n);
  }
  for (double x : probes) {
    if (x <= 0.0 || x > f.x_max()) continue;
    const double v = dr.fn(x);
    if (!std::isfinite(v)) {
      throw EvaluationError("first_variation: non-finite perturbation at x = " +
                            std::to_string(x));
    }
    if (v != 0.0) {
      const double ret = r(x);
      if (!(ret > 0.0 && ret < x)) {
        throw std::invalid_argument(
            "first_variation: perturbation support touches non-interior retention at x = " +
            std::to_string(x));
      }
    }
  }
}

}  // namespace

double objective_A(const ExpectedLossFunction& f, const Retention& r,
                   const PolicyTerms& terms, const Disutility& u, double abs_tol) {
  const double rho = require_rho(u, "objective_A");
  const double c = terms.loading_c;
  const auto breaks = merged_breakpoints(f, r);
  return integrate(
             [&](double x) {
               const double ret = r(x);
               return f(x) * (rho * std::exp(ret / rho) - (1.0 + c) * ret);
             },
             0.0, f.x_max(), abs_tol, breaks)
      .value;
}

double first_variation(const ExpectedLossFunction& f, const Retention& r,
                       const PolicyTerms& terms, const Disutility& u,
                       const Perturbation& dr, double abs_tol) {
  const double rho = require_rho(u, "first_variation");
  const double c = terms.loading_c;
  check_perturbation_support(f, r, dr);
  const auto breaks = merged_breakpoints(f, r, dr.breakpoints);
  return integrate(
             [&](double x) {
               return f(x) * (std::exp(r(x) / rho) - (1.0 + c)) * dr.fn(x);
             },
             dr.support_lo, dr.support_hi, abs_tol, breaks)
      .value;
}

double first_variation_fd(const ExpectedLossFunction& f, const Retention& r,
                          const PolicyTerms& terms, const Disutility& u,
                          const Perturbation& dr, double eps, double abs_tol) {
  const double rho = require_rho(u, "first_variation_fd");
  if (!(eps > 0.0)) throw std::invalid_argument("first_variation_fd: eps must be > 0");
  const double c = terms.loading_c;
  const auto breaks = merged_breakpoints(f, r, dr.breakpoints);
  // (A(r + eps dr) - A(r - eps dr)) / (2 eps) as one quadrature:
  // e^{(r+e dr)/rho} - e^{(r-e dr)/rho} = e^{r/rho} * 2 sinh(e dr / rho)
  return integrate(
             [&](double x) {
               const double d = dr.fn(x);
               return f(x) *
                      (rho * std::exp(r(x) / rho) * std::sinh(eps * d / rho) / eps -
                       (1.0 + c) * d);
             },
             dr.support_lo, dr.support_hi, abs_tol, breaks)
      .value;
}

OptimizationResult optimal_retention_closed_form(const PolicyTerms& terms,
                                                 const Disutility& u,
                                                 const SeverityDomain& domain) {
  const double rho = require_rho(u, "optimal_retention_closed_form");
  OptimizationResult out;
  out.method = OptimizeMethod::ClosedForm;
  if (terms.loading_c > 0.0) {
    out.deductible = rho * std::log1p(terms.loading_c);
    out.retention = Retention::straight_deductible(out.deductible);
    out.insures_nothing = out.deductible >= domain.x_max;
  } else {
    out.deductible = 0.0;
    out.retention = Retention::zero();
  }
  return out;
}

OptimizationResult optimal_retention_discrete(const ExpectedLossFunction& f,
                                              const std::vector<double>& grid_edges,
                                              const PolicyTerms& terms,
                                              const Disutility& u) {
  const double rho = require_rho(u, "optimal_retention_discrete");
  check_grid(grid_edges, f);
  const double c = terms.loading_c;
  const double d = c > 0.0 ? rho * std::log1p(c) : 0.0;

  std::vector<double> levels(grid_edges.size() - 1, 0.0);
  if (c > 0.0) {
    // lower edge below the deductible -> ride the constraint, else sit at it
    for (std::size_t j = 1; j < levels.size(); ++j) {
      levels[j] = grid_edges[j] <= d ? grid_edges[j] : d;
    }
  }
  OptimizationResult out;
  out.method = OptimizeMethod::DiscreteCells;
  out.retention = Retention::step_wise(grid_edges, levels);
  out.deductible = c > 0.0 ? *std::max_element(levels.begin(), levels.end()) : 0.0;
  out.insures_nothing = c > 0.0 && d >= f.x_max();
  evaluate_result(f, terms, u, out);
  return out;
}

OptimizationResult optimal_retention_descent(const ExpectedLossFunction& f,
                                             const std::vector<double>& grid_edges,
                                             const PolicyTerms& terms, const Disutility& u,
                                             const DescentOptions& opts) {
  const double rho = require_rho(u, "optimal_retention_descent");
  check_grid(grid_edges, f);
  const double c = terms.loading_c;
  const int max_iter = std::max(1, opts.iterations);
  const double step0 = opts.step > 0.0 ? opts.step : rho / (1.0 + c);
  const double level_tol = opts.level_tol > 0.0 ? opts.level_tol : 1e-15 * (1.0 + rho);

  const std::size_t cells = grid_edges.size() - 1;
  std::vector<double> rates(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    rates[j] = expected_count(f, grid_edges[j], grid_edges[j + 1]);
  }

  // per-cell integrand of A; f enters only through the trace weights, so the
  // iterates themselves do not depend on f
  const auto cell_obj = [&](double k) { return rho * std::exp(k / rho) - (1.0 + c) * k; };
  const auto cell_grad = [&](double k) { return std::exp(k / rho) - (1.0 + c); };

  std::vector<double> levels(cells, 0.0);
  const auto trace_value = [&]() {
    double a = 0.0;
    for (std::size_t j = 0; j < cells; ++j) a += rates[j] * cell_obj(levels[j]);
    return a;
  };

  OptimizationResult out;
  out.method = OptimizeMethod::ProjectedDescent;
  out.objective_trace.push_back(trace_value());

  int iter = 0;
  double movement = 0.0;
  for (; iter < max_iter; ++iter) {
    movement = 0.0;
    for (std::size_t j = 1; j < cells; ++j) {
      const double upper = grid_edges[j];
      const double k = levels[j];
      const double g = cell_grad(k);
      double s = step0;
      double next = std::clamp(k - s * g, 0.0, upper);
      // backtrack until the per-cell objective does not increase; the ulp-level
      // slack keeps rounding noise from rejecting genuine micro-steps near the
      // flat optimum
      const double obj_k = cell_obj(k);
      const double slack = 1e-14 * std::fabs(obj_k);
      for (int back = 0; back < 60 && cell_obj(next) > obj_k + slack; ++back) {
        s *= 0.5;
        next = std::clamp(k - s * g, 0.0, upper);
      }
      movement = std::max(movement, std::fabs(next - k));
      levels[j] = next;
    }
    out.objective_trace.push_back(trace_value());
    if (movement < level_tol) {
      ++iter;
      break;
    }
  }

  out.iterations_used = iter;
  out.residual = movement;
  out.converged = movement < level_tol;
  out.retention = Retention::step_wise(grid_edges, levels);
  out.deductible = c > 0.0 ? *std::max_element(levels.begin(), levels.end()) : 0.0;
  out.insures_nothing = c > 0.0 && rho * std::log1p(c) >= f.x_max();
  evaluate_result(f, terms, u, out);
  return out;
}

std::pair<double, double> optimal_premium_and_value(const ExpectedLossFunction& f,
                                                    const PolicyTerms& terms,
                                                    const Disutility& u, double abs_tol) {
  const double rho = require_rho(u, "optimal_premium_and_value");
  const double c = terms.loading_c;
  if (!(c > 0.0)) {
    throw std::invalid_argument("optimal_premium_and_value: requires c > 0");
  }
  const double d = rho * std::log1p(c);
  if (d >= f.x_max()) return {0.0, 0.0};  // policy insures nothing

  const double p_bar =
      (1.0 + c) *
      integrate([&](double x) { return f(x) * (x - d); }, d, f.x_max(), abs_tol,
                f.breakpoints())
          .value;
  // integrand rewritten through expm1 of (x - d)/rho:
  // rho (e^{x/rho} - (1+c)) = rho (1+c) expm1((x - d)/rho)
  const double v_bar =
      integrate(
          [&](double x) {
            return f(x) * (1.0 + c) * (rho * std::expm1((x - d) / rho) - (x - d));
          },
          d, f.x_max(), abs_tol, f.breakpoints())
          .value;
  return {p_bar, v_bar};
}

void evaluate_result(const ExpectedLossFunction& f, const PolicyTerms& terms,
                     const Disutility& u, OptimizationResult& result, double abs_tol) {
  result.objective = objective_A(f, result.retention, terms, u, abs_tol);
  const PolicyEvaluation eval = policy_value(f, result.retention, terms, u, abs_tol);
  result.premium = eval.premium;
  result.value = eval.value;
}

const char* to_string(OptimizeMethod method) {
  switch (method) {
    case OptimizeMethod::ClosedForm: return "closed_form";
    case OptimizeMethod::DiscreteCells: return "discrete_cells";
    case OptimizeMethod::ProjectedDescent: return "projected_descent";
  }
  return "unknown";
}

}  // namespace retopt
