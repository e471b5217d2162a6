#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace boulderfit {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const;
};

struct AdamState {
  AdamState() = default;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

  std::vector<double> m;  // first moment
  std::vector<double> v;  // second moment
  long long t = 0;        // completed steps
};

// One bias-corrected Adam update, in place. Throws on mismatched sizes.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, const AdamConfig& cfg);

}  // namespace boulderfit
