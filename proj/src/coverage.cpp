#include "retopt/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace retopt {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Retention Retention::zero() { return Retention(Kind::Zero); }

Retention Retention::identity() { return Retention(Kind::Identity); }

Retention Retention::straight_deductible(double d) {
  require(std::isfinite(d) && d >= 0.0, "straight_deductible: d must be >= 0");
  Retention r(Kind::StraightDeductible);
  r.d_ = d;
  return r;
}

Retention Retention::deductible_with_limit(double d, double limit) {
  require(std::isfinite(d) && d >= 0.0, "deductible_with_limit: d must be >= 0");
  require(std::isfinite(limit) && limit >= d, "deductible_with_limit: limit must be >= d");
  Retention r(Kind::DeductibleWithLimit);
  r.d_ = d;
  r.limit_ = limit;
  return r;
}

Retention Retention::proportional(double alpha) {
  require(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0,
          "proportional: alpha must lie in [0, 1]");
  Retention r(Kind::Proportional);
  r.alpha_ = alpha;
  return r;
}

Retention Retention::step_wise(std::vector<double> edges, std::vector<double> levels) {
  require(edges.size() >= 2 && edges.front() == 0.0,
          "step_wise: edges must start at 0 with at least one cell");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    require(std::isfinite(edges[i + 1]) && edges[i] < edges[i + 1],
            "step_wise: edges must be finite and strictly ascending");
  }
  require(levels.size() + 1 == edges.size(), "step_wise: need one level per cell");
  require(levels[0] == 0.0, "step_wise: first level must be 0");
  for (std::size_t j = 0; j < levels.size(); ++j) {
    require(std::isfinite(levels[j]) && levels[j] >= 0.0 && levels[j] <= edges[j],
            "step_wise: level " + std::to_string(j) + " violates 0 <= k_j <= x_{j-1}");
  }
  Retention r(Kind::StepWise);
  r.edges_ = std::move(edges);
  r.levels_ = std::move(levels);
  return r;
}

double Retention::operator()(double x) const {
  if (!(std::isfinite(x) && x > 0.0)) {
    throw std::invalid_argument("Retention: x must be positive and finite");
  }
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Identity:
      return x;
    case Kind::StraightDeductible:
      return std::min(x, d_);
    case Kind::DeductibleWithLimit:
      return x <= limit_ ? std::min(x, d_) : x - (limit_ - d_);
    case Kind::Proportional:
      return alpha_ * x;
    case Kind::StepWise: {
      require(x <= edges_.back(), "Retention: x beyond step-wise domain");
      const auto it = std::lower_bound(edges_.begin(), edges_.end(), x);
      const std::size_t cell = static_cast<std::size_t>(it - edges_.begin()) - 1;
      return levels_[cell];
    }
  }
  return 0.0;
}

double Retention::indemnity(double x) const { return x - (*this)(x); }

std::vector<double> Retention::breakpoints(double domain_hint) const {
  std::vector<double> pts;
  switch (kind_) {
    case Kind::Zero:
    case Kind::Identity:
    case Kind::Proportional:
      break;
    case Kind::StraightDeductible:
      pts.push_back(d_);
      break;
    case Kind::DeductibleWithLimit:
      pts.push_back(d_);
      pts.push_back(limit_);
      break;
    case Kind::StepWise:
      pts.assign(edges_.begin() + 1, edges_.end() - 1);
      break;
  }
  if (domain_hint > 0.0) {
    std::erase_if(pts, [domain_hint](double p) { return p <= 0.0 || p >= domain_hint; });
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

const char* to_string(Retention::Kind kind) {
  switch (kind) {
    case Retention::Kind::Zero: return "zero";
    case Retention::Kind::Identity: return "identity";
    case Retention::Kind::StraightDeductible: return "deductible";
    case Retention::Kind::DeductibleWithLimit: return "deductible_with_limit";
    case Retention::Kind::Proportional: return "proportional";
    case Retention::Kind::StepWise: return "stepwise";
  }
  return "unknown";
}

}  // namespace retopt
