#pragma once

#include <functional>
#include <span>

namespace retopt {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // accumulated local error estimate (absolute)
};

// Adaptive composite 15-point Gauss-Legendre integration of g on [a, b].
// The interval is first split at the supplied breakpoints so that no
// quadrature cell straddles a kink or jump of the integrand; each piece is
// then bisected until the local error estimate meets its share of abs_tol.
// A non-finite integrand value raises EvaluationError with the abscissa.
QuadratureResult integrate(const std::function<double(double)>& g, double a, double b,
                           double abs_tol = 1e-10,
                           std::span<const double> breakpoints = {});

}  // namespace retopt
