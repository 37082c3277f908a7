#include "retopt/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace retopt {

namespace {

std::int64_t poisson_inversion(Xoshiro256pp& rng, double mean) {
  const double q = std::exp(-mean);
  double u = rng.uniform01();
  double p = q;
  double cum = q;
  std::int64_t k = 0;
  while (u > cum) {
    ++k;
    p *= mean / static_cast<double>(k);
    cum += p;
    if (p < 1e-320) break;  // tail exhausted
  }
  return k;
}

std::int64_t poisson_ptrs(Xoshiro256pp& rng, double mean) {
  const double log_mean = std::log(mean);
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform01() - 0.5;
    const double v = rng.uniform01();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        kf * log_mean - mean - std::lgamma(kf + 1.0)) {
      return static_cast<std::int64_t>(kf);
    }
  }
}

}  // namespace

std::int64_t poisson_sample(Xoshiro256pp& rng, double mean) {
  if (!(std::isfinite(mean) && mean >= 0.0)) {
    throw std::invalid_argument("poisson_sample: mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  return mean < 10.0 ? poisson_inversion(rng, mean) : poisson_ptrs(rng, mean);
}

}  // namespace retopt
