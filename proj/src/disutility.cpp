#include "retopt/disutility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "retopt/errors.hpp"

namespace retopt {

Disutility Disutility::exponential(double rho) {
  if (!(std::isfinite(rho) && rho > 0.0)) {
    throw std::invalid_argument("Disutility: rho must be positive and finite");
  }
  return Disutility(false, rho);
}

Disutility Disutility::risk_neutral() { return Disutility(true, 0.0); }

double Disutility::rho() const {
  if (risk_neutral_) throw std::invalid_argument("Disutility: risk-neutral variant has no rho");
  return rho_;
}

double Disutility::operator()(double loss) const {
  if (!(std::isfinite(loss) && loss >= 0.0)) {
    throw std::invalid_argument("Disutility: loss must be >= 0 and finite");
  }
  if (risk_neutral_) return loss;
  const double z = loss / rho_;
  if (z > 700.0) {
    throw EvaluationError("Disutility: exponent " + std::to_string(z) +
                          " out of range (loss/rho too large)");
  }
  return rho_ * std::expm1(z);
}

double Disutility::inverse(double u) const {
  if (!std::isfinite(u)) throw std::invalid_argument("Disutility: u must be finite");
  if (risk_neutral_) return u;
  if (u < -rho_) {
    throw std::invalid_argument("Disutility: u below -rho, outside the range of U");
  }
  return rho_ * std::log1p(u / rho_);
}

DiscreteLossDistribution::DiscreteLossDistribution(
    std::vector<std::pair<double, double>> atoms)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("DiscreteLossDistribution: no atoms");
  double total = 0.0;
  for (const auto& [value, prob] : atoms_) {
    if (!(std::isfinite(value) && value >= 0.0)) {
      throw std::invalid_argument("DiscreteLossDistribution: values must be finite and >= 0");
    }
    if (!(std::isfinite(prob) && prob >= 0.0)) {
      throw std::invalid_argument("DiscreteLossDistribution: probabilities must be >= 0");
    }
    total += prob;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("DiscreteLossDistribution: probabilities sum to " +
                                std::to_string(total) + ", not 1");
  }
}

double DiscreteLossDistribution::mean() const {
  double m = 0.0;
  for (const auto& [value, prob] : atoms_) m += value * prob;
  return m;
}

double DiscreteLossDistribution::min_value() const {
  double m = atoms_.front().first;
  for (const auto& [value, prob] : atoms_) {
    if (prob > 0.0) m = std::min(m, value);
  }
  return m;
}

double DiscreteLossDistribution::max_value() const {
  double m = 0.0;
  for (const auto& [value, prob] : atoms_) {
    if (prob > 0.0) m = std::max(m, value);
  }
  return m;
}

double certain_equivalent(const Disutility& u, const DiscreteLossDistribution& dist) {
  if (u.is_risk_neutral()) return dist.mean();
  const double rho = u.rho();
  double shift = 0.0;
  for (const auto& [value, prob] : dist.atoms()) {
    if (prob > 0.0) shift = std::max(shift, value / rho);
  }
  double sum = 0.0;
  for (const auto& [value, prob] : dist.atoms()) {
    if (prob > 0.0) sum += prob * std::exp(value / rho - shift);
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw EvaluationError("certain_equivalent: log-sum-exp degenerated after shifting");
  }
  const double ce = rho * (shift + std::log(sum));
  // clamp fp noise into [min atom, max atom]
  return std::clamp(ce, dist.min_value(), dist.max_value());
}

DiscreteLossDistribution convolve(const DiscreteLossDistribution& d1,
                                  const DiscreteLossDistribution& d2,
                                  std::size_t max_atoms) {
  const std::size_t n = d1.atoms().size() * d2.atoms().size();
  if (n > max_atoms) {
    throw EvaluationError("convolve: atom count " + std::to_string(n) +
                          " exceeds cap " + std::to_string(max_atoms));
  }
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(n);
  for (const auto& [v1, p1] : d1.atoms()) {
    for (const auto& [v2, p2] : d2.atoms()) {
      atoms.emplace_back(v1 + v2, p1 * p2);
    }
  }
  return DiscreteLossDistribution(std::move(atoms));
}

double additivity_defect(const Disutility& u, const DiscreteLossDistribution& d1,
                         const DiscreteLossDistribution& d2, std::size_t max_atoms) {
  return certain_equivalent(u, convolve(d1, d2, max_atoms)) - certain_equivalent(u, d1) -
         certain_equivalent(u, d2);
}

}  // namespace retopt
