#pragma once

#include <vector>

namespace retopt {

// Per-loss retention function r with 0 <= r(x) <= x; the indemnity is
// i(x) = x - r(x). Step-wise retentions use half-open cells ]e_{j-1}, e_j]
// (the value at a breakpoint belongs to the cell on its left); breakpoint
// membership is decided with <= comparisons throughout.
class Retention {
 public:
  enum class Kind { Zero, Identity, StraightDeductible, DeductibleWithLimit, Proportional, StepWise };

  static Retention zero();                       // full coverage, r = 0
  static Retention identity();                   // no insurance, r = x
  static Retention straight_deductible(double d);  // r = min(x, d)
  // r(x) = min(x, d) for x <= limit, r(x) = x - (limit - d) above it, so the
  // indemnity is capped at limit - d. Requires 0 <= d <= limit.
  static Retention deductible_with_limit(double d, double limit);
  static Retention proportional(double alpha);   // r = alpha * x, 0 <= alpha <= 1
  // edges: 0 = e_0 < ... < e_n; levels: one per cell with levels[0] = 0 and
  // 0 <= levels[j] <= e_j (feasibility on half-open cells).
  static Retention step_wise(std::vector<double> edges, std::vector<double> levels);

  // Retained amount for a loss of value x (x > 0; for step-wise retentions
  // also x <= edges.back()).
  double operator()(double x) const;
  double indemnity(double x) const;

  // Points where r or its derivative jumps, ascending; clipped to ]0, hint]
  // when a positive domain hint is given.
  std::vector<double> breakpoints(double domain_hint = 0.0) const;

  Kind kind() const { return kind_; }
  double deductible() const { return d_; }
  double limit() const { return limit_; }
  double alpha() const { return alpha_; }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& levels() const { return levels_; }

 private:
  explicit Retention(Kind kind) : kind_(kind) {}

  Kind kind_;
  double d_ = 0.0;
  double limit_ = 0.0;
  double alpha_ = 0.0;
  std::vector<double> edges_;
  std::vector<double> levels_;
};

const char* to_string(Retention::Kind kind);

}  // namespace retopt
