#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "retopt/coverage.hpp"
#include "retopt/disutility.hpp"
#include "retopt/loss_model.hpp"

namespace retopt {

enum class SeverityRule {
  CellMidpoint,      // events take the cell midpoint (classic table discretization)
  UniformWithinCell  // events drawn uniformly in the half-open cell
};

struct SimConfig {
  std::uint64_t seed = 0;
  std::int64_t years = 1;
  std::vector<double> cell_edges;  // 0 = e_0 < ... < e_n = x_max, partition of ]0, x_max]
  SeverityRule severity_rule = SeverityRule::UniformWithinCell;
};

// One simulated year: loss event severities plus per-cell counts.
struct YearSample {
  std::vector<double> events;
  std::vector<std::int64_t> counts;
};

struct MeanWithError {
  double mean = 0.0;
  double std_error = 0.0;
};

struct TotalsEstimate {
  MeanWithError loss;       // mean yearly total loss
  MeanWithError retained;
  MeanWithError indemnity;
  std::int64_t years = 0;
};

struct CeEstimate {
  MeanWithError ce_loss;                   // CE of the yearly total loss
  MeanWithError ce_retained_plus_premium;  // CE of retention + premium, same samples
  std::int64_t years = 0;
};

// Seeded Monte Carlo simulator of the compound Poisson year: independent
// Poisson counts per severity cell with rate = expected count of f over the
// cell. Years use independent RNG substreams keyed by (seed, year_index),
// so each year is reproducible on its own and order does not matter.
class Simulator {
 public:
  Simulator(ExpectedLossFunction f, SimConfig cfg);

  YearSample sample_year(std::int64_t year_index) const;

  TotalsEstimate estimate_totals(const Retention& r) const;

  // CE estimated as rho * ln(empirical mean of e^{total/rho}) with a
  // max-shifted log-sum-exp; std errors by the delta method on the shifted
  // exponential moment. Risk-neutral variant falls back to plain means.
  CeEstimate estimate_certain_equivalents(const Retention& r, double premium,
                                          const Disutility& u) const;

  const std::vector<double>& cell_rates() const { return rates_; }
  const SimConfig& config() const { return cfg_; }
  const ExpectedLossFunction& loss_function() const { return f_; }

 private:
  ExpectedLossFunction f_;
  SimConfig cfg_;
  std::vector<double> rates_;
};

// Characteristic function of the Poisson count on ]x1, x2]:
// exp((e^{it} - 1) * integral of f over the class).
std::complex<double> poisson_char_fn(const ExpectedLossFunction& f, double x1, double x2,
                                     double t);

// Order-independent pairwise summation.
double pairwise_sum(const std::vector<double>& v);

}  // namespace retopt
