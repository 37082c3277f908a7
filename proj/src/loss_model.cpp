#include "retopt/loss_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "retopt/quadrature.hpp"

namespace retopt {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_ascending_from_zero(const std::vector<double>& g, const char* what) {
  require(g.size() >= 2, std::string(what) + ": need at least two points");
  require(g.front() == 0.0, std::string(what) + ": first point must be 0");
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    require(std::isfinite(g[i + 1]) && g[i] < g[i + 1],
            std::string(what) + ": points must be finite and strictly ascending");
  }
}

}  // namespace

SeverityDomain::SeverityDomain(double xm) : x_max(xm) {
  require(std::isfinite(xm) && xm > 0.0, "SeverityDomain: x_max must be positive and finite");
}

ExpectedLossFunction::ExpectedLossFunction(Shape shape, SeverityDomain domain)
    : shape_(shape), domain_(domain) {}

ExpectedLossFunction ExpectedLossFunction::piecewise_constant(std::vector<double> edges,
                                                              std::vector<double> values) {
  check_ascending_from_zero(edges, "piecewise_constant edges");
  require(values.size() + 1 == edges.size(),
          "piecewise_constant: need one value per cell");
  for (double v : values) {
    require(std::isfinite(v) && v > 0.0, "piecewise_constant: values must be > 0");
  }
  ExpectedLossFunction f(Shape::PiecewiseConstant, SeverityDomain(edges.back()));
  f.grid_ = std::move(edges);
  f.values_ = std::move(values);
  f.breakpoints_.assign(f.grid_.begin() + 1, f.grid_.end() - 1);
  return f;
}

ExpectedLossFunction ExpectedLossFunction::piecewise_linear(std::vector<double> nodes,
                                                            std::vector<double> values) {
  check_ascending_from_zero(nodes, "piecewise_linear nodes");
  require(values.size() == nodes.size(), "piecewise_linear: need one value per node");
  for (double v : values) {
    require(std::isfinite(v) && v > 0.0, "piecewise_linear: values must be > 0");
  }
  ExpectedLossFunction f(Shape::PiecewiseLinear, SeverityDomain(nodes.back()));
  f.grid_ = std::move(nodes);
  f.values_ = std::move(values);
  f.breakpoints_.assign(f.grid_.begin() + 1, f.grid_.end() - 1);
  return f;
}

ExpectedLossFunction ExpectedLossFunction::exponential(double a, double b, double x_max) {
  require(std::isfinite(a) && a > 0.0, "exponential: a must be > 0");
  require(std::isfinite(b) && b > 0.0, "exponential: b must be > 0");
  ExpectedLossFunction f(Shape::Exponential, SeverityDomain(x_max));
  f.a_ = a;
  f.b_ = b;
  return f;
}

ExpectedLossFunction ExpectedLossFunction::truncated_power(double a, double p, double cutoff,
                                                           double x_max) {
  require(std::isfinite(a) && a > 0.0, "truncated_power: a must be > 0");
  require(std::isfinite(p) && p >= 0.0, "truncated_power: p must be >= 0");
  SeverityDomain domain(x_max);
  require(std::isfinite(cutoff) && cutoff > 0.0 && cutoff < x_max,
          "truncated_power: cutoff must lie in ]0, x_max[");
  ExpectedLossFunction f(Shape::TruncatedPower, domain);
  f.a_ = a;
  f.p_ = p;
  f.cutoff_ = cutoff;
  f.breakpoints_ = {cutoff};
  return f;
}

double ExpectedLossFunction::operator()(double x) const {
  if (!(x > 0.0 && x <= domain_.x_max)) {
    throw std::invalid_argument("ExpectedLossFunction: x outside ]0, x_max]");
  }
  switch (shape_) {
    case Shape::PiecewiseConstant: {
      // half-open cells ]e_{i}, e_{i+1}]
      const auto it = std::lower_bound(grid_.begin(), grid_.end(), x);
      const std::size_t cell = static_cast<std::size_t>(it - grid_.begin()) - 1;
      return values_[cell];
    }
    case Shape::PiecewiseLinear: {
      const auto it = std::lower_bound(grid_.begin(), grid_.end(), x);
      const std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
      const std::size_t lo = hi - 1;
      const double t = (x - grid_[lo]) / (grid_[hi] - grid_[lo]);
      return values_[lo] + t * (values_[hi] - values_[lo]);
    }
    case Shape::Exponential:
      return a_ * std::exp(-x / b_);
    case Shape::TruncatedPower:
      return x <= cutoff_ ? 0.0 : a_ * std::pow(x, -p_);
  }
  return 0.0;
}

double expected_count(const ExpectedLossFunction& f, double x1, double x2, double abs_tol) {
  if (!(x1 >= 0.0 && x1 <= x2 && x2 <= f.x_max())) {
    throw std::invalid_argument("expected_count: need 0 <= x1 <= x2 <= x_max");
  }
  if (x1 == x2) return 0.0;
  return integrate([&f](double x) { return f(x); }, x1, x2, abs_tol, f.breakpoints()).value;
}

double expected_total_loss(const ExpectedLossFunction& f, double abs_tol) {
  return integrate([&f](double x) { return x * f(x); }, 0.0, f.x_max(), abs_tol,
                   f.breakpoints())
      .value;
}

double integrate_weighted(const ExpectedLossFunction& f,
                          const std::function<double(double)>& g,
                          std::span<const double> g_breakpoints, double abs_tol) {
  std::vector<double> breaks(f.breakpoints());
  breaks.insert(breaks.end(), g_breakpoints.begin(), g_breakpoints.end());
  return integrate([&](double x) { return g(x) * f(x); }, 0.0, f.x_max(), abs_tol, breaks)
      .value;
}

}  // namespace retopt
