#pragma once

#include <cmath>

namespace boulderfit {

// Logistic function, evaluated on the side that cannot overflow.
inline double sigmoid(double x) noexcept {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^x) without overflow.
inline double softplus(double x) noexcept {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Negative log likelihood of outcome y under logit z: softplus(z) - y z.
inline double logistic_nll(int y, double z) noexcept { return softplus(z) - (y ? z : 0.0); }

}  // namespace boulderfit
