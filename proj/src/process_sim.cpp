#include "retopt/process_sim.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "retopt/errors.hpp"
#include "retopt/rng.hpp"

namespace retopt {

namespace {

double pairwise_sum_impl(std::span<const double> v) {
  if (v.size() <= 64) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum_impl(v.first(half)) + pairwise_sum_impl(v.subspan(half));
}

MeanWithError mean_with_error(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  MeanWithError out;
  out.mean = pairwise_sum(v) / n;
  if (v.size() < 2) return out;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - out.mean;
    sq[i] = d * d;
  }
  out.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0)) / std::sqrt(n);
  return out;
}

// CE and its delta-method std error from per-year totals t_i:
// CE = rho * (m + ln mean(e^{t_i/rho - m})), se = rho * s_Z / (Zbar * sqrt(N)).
MeanWithError ce_with_error(const std::vector<double>& totals, double rho) {
  double shift = 0.0;
  for (double t : totals) shift = std::max(shift, t / rho);
  std::vector<double> z(totals.size());
  for (std::size_t i = 0; i < totals.size(); ++i) z[i] = std::exp(totals[i] / rho - shift);
  const MeanWithError zbar = mean_with_error(z);
  if (!(zbar.mean > 0.0) || !std::isfinite(zbar.mean)) {
    throw EvaluationError("estimate_certain_equivalents: exponential moment degenerated "
                          "after shifting (heavy tail)");
  }
  MeanWithError out;
  out.mean = rho * (shift + std::log(zbar.mean));
  out.std_error = rho * zbar.std_error / zbar.mean;
  return out;
}

}  // namespace

double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum_impl(std::span<const double>(v));
}

Simulator::Simulator(ExpectedLossFunction f, SimConfig cfg)
    : f_(std::move(f)), cfg_(std::move(cfg)) {
  if (cfg_.years < 1) throw std::invalid_argument("SimConfig: years must be >= 1");
  const auto& e = cfg_.cell_edges;
  if (e.size() < 2 || e.front() != 0.0) {
    throw std::invalid_argument("SimConfig: cell_edges must start at 0 with >= 1 cell");
  }
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    if (!(e[i] < e[i + 1])) {
      throw std::invalid_argument("SimConfig: cell_edges must be strictly ascending");
    }
  }
  if (e.back() != f_.x_max()) {
    throw std::invalid_argument("SimConfig: cells must cover ]0, x_max] exactly");
  }
  rates_.reserve(e.size() - 1);
  for (std::size_t j = 0; j + 1 < e.size(); ++j) {
    rates_.push_back(expected_count(f_, e[j], e[j + 1]));
  }
}

YearSample Simulator::sample_year(std::int64_t year_index) const {
  Xoshiro256pp rng(cfg_.seed, static_cast<std::uint64_t>(year_index));
  const auto& e = cfg_.cell_edges;
  YearSample year;
  year.counts.resize(rates_.size());
  for (std::size_t j = 0; j < rates_.size(); ++j) {
    const std::int64_t n = poisson_sample(rng, rates_[j]);
    year.counts[j] = n;
    const double lo = e[j];
    const double width = e[j + 1] - e[j];
    for (std::int64_t k = 0; k < n; ++k) {
      if (cfg_.severity_rule == SeverityRule::CellMidpoint) {
        year.events.push_back(lo + 0.5 * width);
      } else {
        // 1 - u maps [0,1) onto (0,1], keeping the event in the half-open cell
        year.events.push_back(lo + (1.0 - rng.uniform01()) * width);
      }
    }
  }
  return year;
}

TotalsEstimate Simulator::estimate_totals(const Retention& r) const {
  std::vector<double> loss(cfg_.years), retained(cfg_.years), indemnity(cfg_.years);
  for (std::int64_t y = 0; y < cfg_.years; ++y) {
    const YearSample year = sample_year(y);
    double x = 0.0, ret = 0.0;
    for (double event : year.events) {
      x += event;
      ret += r(event);
    }
    loss[y] = x;
    retained[y] = ret;
    indemnity[y] = x - ret;  // complementarity holds exactly per sample
  }
  TotalsEstimate out;
  out.loss = mean_with_error(loss);
  out.retained = mean_with_error(retained);
  out.indemnity = mean_with_error(indemnity);
  out.years = cfg_.years;
  return out;
}

CeEstimate Simulator::estimate_certain_equivalents(const Retention& r, double premium,
                                                   const Disutility& u) const {
  std::vector<double> loss(cfg_.years), cost(cfg_.years);
  for (std::int64_t y = 0; y < cfg_.years; ++y) {
    const YearSample year = sample_year(y);
    double x = 0.0, ret = 0.0;
    for (double event : year.events) {
      x += event;
      ret += r(event);
    }
    loss[y] = x;
    cost[y] = ret + premium;
  }
  CeEstimate out;
  out.years = cfg_.years;
  if (u.is_risk_neutral()) {
    out.ce_loss = mean_with_error(loss);
    out.ce_retained_plus_premium = mean_with_error(cost);
  } else {
    out.ce_loss = ce_with_error(loss, u.rho());
    out.ce_retained_plus_premium = ce_with_error(cost, u.rho());
  }
  return out;
}

std::complex<double> poisson_char_fn(const ExpectedLossFunction& f, double x1, double x2,
                                     double t) {
  const double rate = expected_count(f, x1, x2);
  const std::complex<double> i_unit(0.0, 1.0);
  return std::exp((std::exp(i_unit * t) - 1.0) * rate);
}

}  // namespace retopt
