#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace retopt {

// Exponential disutility U(l) = rho * (e^{l/rho} - 1) with risk tolerance
// rho > 0, or the risk-neutral limit U(l) = l. The risk-neutral case is a
// distinct variant, never a huge finite rho.
class Disutility {
 public:
  static Disutility exponential(double rho);
  static Disutility risk_neutral();

  bool is_risk_neutral() const { return risk_neutral_; }
  double rho() const;  // throws for the risk-neutral variant

  double operator()(double loss) const;
  double inverse(double u) const;

 private:
  Disutility(bool neutral, double rho) : risk_neutral_(neutral), rho_(rho) {}
  bool risk_neutral_;
  double rho_;
};

// Finite discrete loss distribution: atoms (loss value >= 0, probability),
// probabilities summing to 1 within 1e-12.
class DiscreteLossDistribution {
 public:
  explicit DiscreteLossDistribution(std::vector<std::pair<double, double>> atoms);

  std::span<const std::pair<double, double>> atoms() const { return atoms_; }
  double mean() const;
  double min_value() const;
  double max_value() const;

 private:
  std::vector<std::pair<double, double>> atoms_;
};

// Sure cost with the same disutility as the uncertain cost. Exponential case
// reduces to rho * ln(sum p_i e^{l_i/rho}), evaluated with a max-shifted
// log-sum-exp; risk-neutral case is the mean.
double certain_equivalent(const Disutility& u, const DiscreteLossDistribution& dist);

// Independent-sum convolution of the two distributions' atoms. Throws when
// the atom count would exceed max_atoms.
DiscreteLossDistribution convolve(const DiscreteLossDistribution& d1,
                                  const DiscreteLossDistribution& d2,
                                  std::size_t max_atoms = 1u << 20);

// CE(d1 (+) d2) - CE(d1) - CE(d2), zero for exponential and risk-neutral
// disutilities over independent distributions.
double additivity_defect(const Disutility& u, const DiscreteLossDistribution& d1,
                         const DiscreteLossDistribution& d2,
                         std::size_t max_atoms = 1u << 20);

}  // namespace retopt
