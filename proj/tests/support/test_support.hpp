#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "adex/rng.hpp"
#include "adex/simulator.hpp"
#include "adex/solver.hpp"
#include "adex/state.hpp"

namespace adex::testing {

inline Instance gaussian_instance(std::vector<double> means, double sigma = 1.0) {
  return Instance(RewardFamily::gaussian(sigma), std::move(means));
}

inline Instance teaser_instance() {
  return gaussian_instance({0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
}

// Random Gaussian instance with common variance, distinct means, and a
// minimum gap so grid oracles stay well conditioned.
inline Instance random_gaussian_instance(Rng& rng, int k, double min_gap = 0.1,
                                         double sigma_lo = 0.5, double sigma_hi = 2.0) {
  const double sigma = sigma_lo + (sigma_hi - sigma_lo) * rng.uniform();
  std::vector<double> means;
  while (true) {
    means.clear();
    for (int i = 0; i < k; ++i) means.push_back(2.0 * rng.normal());
    std::sort(means.begin(), means.end());
    bool ok = true;
    for (int i = 1; i < k; ++i) ok = ok && means[i] - means[i - 1] >= min_gap * sigma;
    if (ok) break;
  }
  return Instance(RewardFamily::gaussian(sigma), std::move(means));
}

inline Instance random_bernoulli_instance(Rng& rng, int k, double min_gap = 0.08) {
  std::vector<double> means;
  while (true) {
    means.clear();
    for (int i = 0; i < k; ++i) means.push_back(0.05 + 0.9 * rng.uniform());
    std::sort(means.begin(), means.end());
    bool ok = true;
    for (int i = 1; i < k; ++i) ok = ok && means[i] - means[i - 1] >= min_gap;
    if (ok) break;
  }
  return Instance(RewardFamily::bernoulli(), std::move(means));
}

// Random allocation on the simplex (Dirichlet(1,...,1) via exponentials).
inline std::vector<double> random_simplex_point(Rng& rng, int k) {
  std::vector<double> p(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    p[i] = -std::log(rng.uniform_open());
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

// Builds a state with the given exact counts; each arm's observations all
// equal its target mean, so the empirical means land exactly on `means`.
inline ExperimentState make_state(const RewardFamily& family,
                                  const std::vector<std::int64_t>& counts,
                                  const std::vector<double>& means) {
  ExperimentState st(family, static_cast<int>(counts.size()));
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::int64_t n = 0; n < counts[i]; ++n) st.update(static_cast<int>(i), means[i]);
  return st;
}

// Brute-force constrained minimum of w_i KL(ti, v) + w_j KL(tj, v) over a
// grid of v in [tj, ti]; the oracle for the closed-form Chernoff information.
inline double grid_chernoff(const RewardFamily& family, double ti, double tj, double wi,
                            double wj, int points = 1000000) {
  double best = std::numeric_limits<double>::infinity();
  for (int g = 0; g <= points; ++g) {
    const double v = tj + (ti - tj) * static_cast<double>(g) / points;
    const double val = (wi > 0.0 ? wi * family.kl(ti, v) : 0.0) +
                       (wj > 0.0 ? wj * family.kl(tj, v) : 0.0);
    best = std::min(best, val);
  }
  return best;
}

// Exhaustive simplex-grid maximizer of min_j D_{theta,I*,j}(p_I*, p_j) over
// sum_i p_i C_i for three-arm instances; the independent oracle for p*.
inline std::vector<double> grid_p_star_3arm(const Instance& instance, const CostModel& costs,
                                            int steps = 1000) {
  const int best = instance.best_arm();
  const auto& means = instance.means();
  std::vector<double> cost(3);
  for (int i = 0; i < 3; ++i) cost[i] = costs.within(means, i);

  std::vector<double> argmax(3, 1.0 / 3.0);
  double best_val = -1.0;
  for (int a = 1; a < steps; ++a) {
    for (int b = 1; b < steps - a; ++b) {
      const double p0 = static_cast<double>(a) / steps;
      const double p1 = static_cast<double>(b) / steps;
      const double p2 = 1.0 - p0 - p1;
      const double p[3] = {p0, p1, p2};
      double min_d = std::numeric_limits<double>::infinity();
      for (int j = 0; j < 3; ++j) {
        if (j == best) continue;
        min_d = std::min(
            min_d, chernoff_info(instance.family(), means[best], means[j], p[best], p[j]).value);
      }
      const double spend = p[0] * cost[0] + p[1] * cost[1] + p[2] * cost[2];
      const double val = min_d / spend;
      if (val > best_val) {
        best_val = val;
        argmax = {p[0], p[1], p[2]};
      }
    }
  }
  return argmax;
}

// Mixed payoff against the skeptic's mixture q over the hard alternatives.
inline double payoff_mixed(const Instance& instance, const CostModel& costs,
                           std::span<const double> p, const OptimalAllocation& alloc) {
  double out = 0.0;
  for (int j = 0; j < instance.k(); ++j) {
    if (j == alloc.best) continue;
    out += alloc.q_star[j] * payoff(instance, costs, p, alloc.alternatives[j]);
  }
  return out;
}

}  // namespace adex::testing
