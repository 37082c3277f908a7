#pragma once

#include <functional>
#include <span>
#include <vector>

namespace retopt {

// Domain of loss severities ]0, x_max].
struct SeverityDomain {
  double x_max;
  explicit SeverityDomain(double xm);
};

// Expected loss function f: density of expected yearly loss counts per unit
// severity on ]0, x_max]. The integral over a severity class gives the
// expected number of losses a year in that class.
//
// Four shapes are supported. The piecewise shapes mirror Risk-Management
// loss tables; the parametric ones have closed-form integrals used as test
// oracles. The truncated power shape carries an explicit lower cutoff and is
// zero on ]0, cutoff].
class ExpectedLossFunction {
 public:
  enum class Shape { PiecewiseConstant, PiecewiseLinear, Exponential, TruncatedPower };

  // edges: 0 = e_0 < e_1 < ... < e_n = x_max; values: one per cell, > 0.
  static ExpectedLossFunction piecewise_constant(std::vector<double> edges,
                                                 std::vector<double> values);
  // nodes: 0 = x_0 < ... < x_n = x_max; values at nodes, > 0; linear between.
  static ExpectedLossFunction piecewise_linear(std::vector<double> nodes,
                                               std::vector<double> values);
  // f(x) = a * exp(-x / b)
  static ExpectedLossFunction exponential(double a, double b, double x_max);
  // f(x) = a * x^(-p) on ]cutoff, x_max], 0 below the cutoff
  static ExpectedLossFunction truncated_power(double a, double p, double cutoff, double x_max);

  double operator()(double x) const;
  double x_max() const { return domain_.x_max; }
  const SeverityDomain& domain() const { return domain_; }
  Shape shape() const { return shape_; }

  // Interior points where f or its derivative is discontinuous, ascending.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

 private:
  ExpectedLossFunction(Shape shape, SeverityDomain domain);

  Shape shape_;
  SeverityDomain domain_;
  std::vector<double> grid_;     // edges or nodes for piecewise shapes
  std::vector<double> values_;
  double a_ = 0.0, b_ = 0.0, p_ = 0.0, cutoff_ = 0.0;
  std::vector<double> breakpoints_;
};

// Expected number of losses a year valued in ]x1, x2].
double expected_count(const ExpectedLossFunction& f, double x1, double x2,
                      double abs_tol = 1e-10);

// Expected yearly total loss, the x-weighted integral of f.
double expected_total_loss(const ExpectedLossFunction& f, double abs_tol = 1e-10);

// Integral of g(x) * f(x) over ]0, x_max]. Breakpoints of g must be supplied
// by the caller; quadrature cells never straddle them or those of f.
double integrate_weighted(const ExpectedLossFunction& f,
                          const std::function<double(double)>& g,
                          std::span<const double> g_breakpoints = {},
                          double abs_tol = 1e-10);

}  // namespace retopt
