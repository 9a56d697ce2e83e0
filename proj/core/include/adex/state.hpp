#pragma once

#include <cstdint>
#include <vector>

#include "adex/exp_family.hpp"

namespace adex {

// Per-trajectory sufficient statistics: raw counts and reward sums, with
// empirical means derived on demand (sums are stored so repeated queries do
// not accumulate incremental-mean drift).
//
// Sentinel convention for an arm that has never been sampled: its empirical
// mean reads 0 and its standard error reads +infinity.
class ExperimentState {
 public:
  ExperimentState(RewardFamily family, int k);

  const RewardFamily& family() const { return family_; }
  int k() const { return k_; }
  std::int64_t t() const { return t_; }

  void update(int arm, double reward);

  std::int64_t count(int arm) const { return counts_[check(arm)]; }
  double sum(int arm) const { return sums_[check(arm)]; }
  double mean(int arm) const;
  // Fraction of measurements allocated to `arm` (0 while t == 0).
  double proportion(int arm) const;
  // Gaussian standard error sigma / sqrt(N); +infinity when unsampled.
  double std_error(int arm) const;

  // Lowest-index argmax of the empirical means (sentinel means included).
  int empirical_best() const;

  // Z-statistic for the difference in means; 0 when either arm is unsampled.
  // Gaussian family only.
  double z_statistic(int i, int j) const;

  const std::vector<std::int64_t>& counts() const { return counts_; }

 private:
  int check(int arm) const;

  RewardFamily family_;
  int k_;
  std::int64_t t_ = 0;
  std::vector<std::int64_t> counts_;
  std::vector<double> sums_;
};

struct ChernoffResult {
  double value;      // weighted Chernoff information
  double minimizer;  // the weighted average mean attaining it
};

// Weighted Chernoff information between two arms with means theta_i >= theta_j
// and nonnegative weights. Degenerate weights follow the convention that the
// minimizer is theta_j (both zero) or the positive-weight arm's own mean.
ChernoffResult chernoff_info(const RewardFamily& family, double theta_i, double theta_j,
                             double w_i, double w_j);

struct StoppingStatistic {
  int leader;
  double value;  // t * min_{j != leader} D(m_leader, m_j; p_leader, p_j)
};

// Generalized likelihood-ratio stopping statistic. Any pairwise term that
// involves an unsampled arm contributes 0, so the statistic is 0 (and the
// experiment cannot stop) until every arm has been sampled at least once.
StoppingStatistic stopping_statistic(const ExperimentState& state);

}  // namespace adex
