#pragma once

#include <cstdint>

#include "adex/state.hpp"

namespace adex {

enum class StopKind { exact_threshold, heuristic_quantile, never };

// Stopping rules are the one place the population size n enters a policy.
struct StoppingRule {
  StopKind kind = StopKind::never;
  std::int64_t n = 2;

  static StoppingRule exact(std::int64_t n);
  static StoppingRule heuristic(std::int64_t n);
  static StoppingRule never() { return StoppingRule{StopKind::never, 2}; }
};

// Exact stopping threshold gamma_t(n); +infinity at t = 0. The iterated-log
// term is negative for t in {1, 2} and is kept as written.
double gamma_threshold(std::int64_t t, std::int64_t n, int k);

// h(u) = u - ln(u) on [1, inf), inverted by bisection to absolute 1e-12.
double h_inverse(double y);

// Calibration function C_exp(x) = 2 * h_tilde((h^{-1}(x+1) + ln(pi^2/3)) / 2).
double c_exp(double x);

// Deviation threshold c_hat_t(delta) = 2 C_exp(ln((k-1)/delta)/2) + 6 ln(ln(t/2)+1).
double kaufmann_threshold(std::int64_t t, double delta, int k);

// Standard normal CDF and its inverse (rational approximation plus one
// Newton refinement; absolute error well below 1e-9).
double normal_cdf(double x);
double normal_quantile(double p);

// ln Phi(x), stable into the deep left tail (asymptotic series below -8).
double log_normal_cdf(double x);

// Evaluate the stopping decision for the current state. Always false at t=0.
// The heuristic quantile rule is Gaussian-only and additionally requires
// every arm to be sampled at least once, matching the exact rule.
bool should_stop(const StoppingRule& rule, const ExperimentState& state);

}  // namespace adex
