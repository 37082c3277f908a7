#include "retopt/cli_runner.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "retopt/errors.hpp"
#include "retopt/optimizer.hpp"

namespace retopt {

namespace {

const Retention& require_retention(const RunConfig& cfg, const char* subcommand) {
  if (!cfg.retention) {
    throw ConfigError(std::string("'retention' section required for ") + subcommand);
  }
  return *cfg.retention;
}

std::string insured_columns(const RunConfig& cfg) {
  if (cfg.insured.is_risk_neutral()) return "risk_neutral,";
  return format_full(cfg.insured.rho()) + ",";
}

std::vector<double> uniform_grid(double x_max, int cells) {
  std::vector<double> edges(cells + 1);
  for (int i = 0; i <= cells; ++i) edges[i] = x_max * i / cells;
  return edges;
}

void run_value(const RunConfig& cfg, std::ostream& out) {
  const Retention& r = require_retention(cfg, "value");
  const PolicyEvaluation eval =
      policy_value(cfg.loss_function, r, cfg.terms, cfg.insured);
  out << "rho,loading_c,retention_kind,premium,ce_loss,ce_retained_plus_premium,value\n";
  out << insured_columns(cfg) << format_full(cfg.terms.loading_c) << ','
      << to_string(r.kind()) << ',' << format_full(eval.premium) << ','
      << format_full(eval.ce_loss) << ',' << format_full(eval.ce_retained_plus_premium)
      << ',' << format_full(eval.value) << '\n';
}

void run_breakeven(const RunConfig& cfg, std::ostream& out) {
  const Retention& r = require_retention(cfg, "breakeven");
  const double c_bar = breakeven_loading(cfg.loss_function, r, cfg.insured);
  const double indemnity =
      premium(cfg.loss_function, r, PolicyTerms(0.0));  // (1+0) * <I>
  out << "rho,retention_kind,expected_indemnity,c_bar\n";
  out << insured_columns(cfg) << to_string(r.kind()) << ',' << format_full(indemnity) << ','
      << format_full(c_bar) << '\n';
}

void emit_result_row(const OptimizationResult& res, std::ostream& out) {
  out << to_string(res.method) << ',' << format_full(res.deductible) << ','
      << format_full(res.objective) << ',' << format_full(res.premium) << ','
      << format_full(res.value) << ',' << (res.insures_nothing ? 1 : 0) << ','
      << (res.converged ? 1 : 0) << '\n';
}

void run_optimize(const RunConfig& cfg, std::ostream& out, std::ostream* levels_out) {
  const auto& f = cfg.loss_function;
  const auto grid = uniform_grid(f.x_max(), cfg.optimize.grid_cells);

  OptimizationResult closed =
      optimal_retention_closed_form(cfg.terms, cfg.insured, f.domain());
  evaluate_result(f, cfg.terms, cfg.insured, closed);
  OptimizationResult discrete =
      optimal_retention_discrete(f, grid, cfg.terms, cfg.insured);
  DescentOptions opts;
  opts.iterations = cfg.optimize.descent_iterations;
  opts.step = cfg.optimize.descent_step;
  OptimizationResult descent =
      optimal_retention_descent(f, grid, cfg.terms, cfg.insured, opts);

  out << "method,deductible,objective,premium,value,insures_nothing,converged\n";
  emit_result_row(closed, out);
  emit_result_row(discrete, out);
  emit_result_row(descent, out);

  if (levels_out) {
    *levels_out << "cell_lower_edge,discrete_level,descent_level\n";
    const auto& dl = discrete.retention.levels();
    const auto& gl = descent.retention.levels();
    for (std::size_t j = 0; j < dl.size(); ++j) {
      *levels_out << format_full(grid[j]) << ',' << format_full(dl[j]) << ','
                  << format_full(gl[j]) << '\n';
    }
  }
}

void run_simulate(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.sim) throw ConfigError("'sim' section required for simulate");
  const Retention& r = require_retention(cfg, "simulate");
  const Simulator sim(cfg.loss_function, *cfg.sim);

  out << "# seed=" << cfg.sim->seed << " years=" << cfg.sim->years
      << " generator=xoshiro256++/splitmix64\n";
  out << "year,loss,retained,indemnity\n";
  for (std::int64_t y = 0; y < cfg.sim->years; ++y) {
    const YearSample year = sim.sample_year(y);
    double x = 0.0, ret = 0.0;
    for (double event : year.events) {
      x += event;
      ret += r(event);
    }
    out << y << ',' << format_full(x) << ',' << format_full(ret) << ','
        << format_full(x - ret) << '\n';
  }

  const TotalsEstimate totals = sim.estimate_totals(r);
  const double p = premium(cfg.loss_function, r, cfg.terms);
  out << "# summary seed=" << cfg.sim->seed << '\n';
  out << "quantity,mc_mean,mc_std_error,analytic\n";
  out << "loss," << format_full(totals.loss.mean) << ',' << format_full(totals.loss.std_error)
      << ',' << format_full(expected_total_loss(cfg.loss_function)) << '\n';
  const double mean_retained =
      integrate_weighted(cfg.loss_function, [&r](double x) { return r(x); },
                         r.breakpoints(cfg.loss_function.x_max()));
  out << "retained," << format_full(totals.retained.mean) << ','
      << format_full(totals.retained.std_error) << ',' << format_full(mean_retained) << '\n';
  out << "indemnity," << format_full(totals.indemnity.mean) << ','
      << format_full(totals.indemnity.std_error) << ','
      << format_full(premium(cfg.loss_function, r, PolicyTerms(0.0))) << '\n';

  if (!cfg.insured.is_risk_neutral() &&
      cfg.loss_function.x_max() / cfg.insured.rho() <= 700.0) {
    const CeEstimate ce = sim.estimate_certain_equivalents(r, p, cfg.insured);
    out << "ce_loss," << format_full(ce.ce_loss.mean) << ','
        << format_full(ce.ce_loss.std_error) << ','
        << format_full(ce_total_loss(cfg.loss_function, cfg.insured)) << '\n';
    out << "ce_retained_plus_premium," << format_full(ce.ce_retained_plus_premium.mean) << ','
        << format_full(ce.ce_retained_plus_premium.std_error) << ','
        << format_full(ce_retained_plus_premium(cfg.loss_function, r, p, cfg.insured))
        << '\n';
  }
}

void run_sweep(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.sweep) throw ConfigError("'sweep' section required for sweep");
  const auto& spec = *cfg.sweep;
  out << "parameter,parameter_value,premium,policy_value,optimal_deductible\n";
  for (double v : spec.values) {
    PolicyTerms terms = cfg.terms;
    Disutility insured = cfg.insured;
    std::optional<Retention> retention = cfg.retention;
    if (spec.parameter == "c") {
      terms = PolicyTerms(v);
    } else if (spec.parameter == "rho") {
      insured = Disutility::exponential(v);
    } else {
      retention = Retention::straight_deductible(v);
    }

    double prem = std::numeric_limits<double>::quiet_NaN();
    double value = std::numeric_limits<double>::quiet_NaN();
    if (retention) {
      const PolicyEvaluation eval = policy_value(cfg.loss_function, *retention, terms, insured);
      prem = eval.premium;
      value = eval.value;
    }
    double deductible = 0.0;
    if (!insured.is_risk_neutral()) {
      deductible = optimal_retention_closed_form(terms, insured,
                                                 cfg.loss_function.domain())
                       .deductible;
    }
    out << spec.parameter << ',' << format_full(v) << ',' << format_full(prem) << ','
        << format_full(value) << ',' << format_full(deductible) << '\n';
  }
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void run_subcommand(const std::string& subcommand, const RunConfig& cfg, std::ostream& out,
                    std::ostream* levels_out) {
  if (subcommand == "value") {
    run_value(cfg, out);
  } else if (subcommand == "breakeven") {
    run_breakeven(cfg, out);
  } else if (subcommand == "optimize") {
    run_optimize(cfg, out, levels_out);
  } else if (subcommand == "simulate") {
    run_simulate(cfg, out);
  } else if (subcommand == "sweep") {
    run_sweep(cfg, out);
  } else {
    throw ConfigError("unknown subcommand '" + subcommand + "'");
  }
}

}  // namespace retopt
