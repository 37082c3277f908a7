#include "retopt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "retopt/errors.hpp"

namespace retopt {

namespace {

constexpr int kGaussOrder = 15;
constexpr int kMaxDepth = 48;

// Nodes and weights on [-1, 1], computed once by Newton iteration on the
// Legendre polynomial (cosine initial guess).
struct GaussRule {
  double node[kGaussOrder];
  double weight[kGaussOrder];
  GaussRule() {
    const int n = kGaussOrder;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = 1.0, p2 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
        }
        pp = n * (z * p1 - p2) / (z * z - 1.0);
        const double z1 = z;
        z = z1 - p1 / pp;
        if (std::fabs(z - z1) <= 1e-16) break;
      }
      node[i] = -z;
      node[n - 1 - i] = z;
      weight[i] = 2.0 / ((1.0 - z * z) * pp * pp);
      weight[n - 1 - i] = weight[i];
    }
  }
};

const GaussRule& rule() {
  static const GaussRule r;
  return r;
}

double eval_checked(const std::function<double(double)>& g, double x) {
  const double v = g(x);
  if (!std::isfinite(v)) {
    throw EvaluationError("non-finite integrand value at x = " + std::to_string(x));
  }
  return v;
}

double gauss(const std::function<double(double)>& g, double a, double b) {
  const GaussRule& r = rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < kGaussOrder; ++i) {
    sum += r.weight[i] * eval_checked(g, mid + half * r.node[i]);
  }
  return half * sum;
}

void adapt(const std::function<double(double)>& g, double a, double b, double tol,
           double whole, int depth, QuadratureResult& out) {
  const double mid = 0.5 * (a + b);
  const double left = gauss(g, a, mid);
  const double right = gauss(g, mid, b);
  const double delta = std::fabs(left + right - whole);
  const double width = b - a;
  // the relative floor stops refinement once the split disagreement is at
  // machine-precision level of the local integral, where an absolute
  // tolerance below that could never be certified
  const double noise_floor =
      std::numeric_limits<double>::epsilon() * (std::fabs(left) + std::fabs(right));
  if (delta <= tol || delta <= noise_floor || depth >= kMaxDepth ||
      width <= std::numeric_limits<double>::epsilon() * (std::fabs(a) + std::fabs(b) + 1.0)) {
    out.value += left + right;
    out.error += delta;
    return;
  }
  adapt(g, a, mid, 0.5 * tol, left, depth + 1, out);
  adapt(g, mid, b, 0.5 * tol, right, depth + 1, out);
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& g, double a, double b,
                           double abs_tol, std::span<const double> breakpoints) {
  if (!(std::isfinite(a) && std::isfinite(b)) || a > b) {
    throw EvaluationError("invalid integration interval [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
  }
  QuadratureResult out;
  if (a == b) return out;

  std::vector<double> pts;
  pts.push_back(a);
  for (double p : breakpoints) {
    if (p > a && p < b) pts.push_back(p);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const double piece_tol = std::max(abs_tol / static_cast<double>(pts.size() - 1), 1e-300);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double whole = gauss(g, pts[i], pts[i + 1]);
    adapt(g, pts[i], pts[i + 1], piece_tol, whole, 0, out);
  }
  return out;
}

}  // namespace retopt
