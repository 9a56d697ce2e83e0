#include "adex/state.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace adex {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ExperimentState::ExperimentState(RewardFamily family, int k)
    : family_(family), k_(k), counts_(k, 0), sums_(k, 0.0) {
  if (k < 2) throw std::invalid_argument("ExperimentState: need at least two arms");
}

int ExperimentState::check(int arm) const {
  if (arm < 0 || arm >= k_) throw std::out_of_range("ExperimentState: arm index");
  return arm;
}

void ExperimentState::update(int arm, double reward) {
  check(arm);
  ++counts_[arm];
  sums_[arm] += reward;
  ++t_;
}

double ExperimentState::mean(int arm) const {
  check(arm);
  return counts_[arm] > 0 ? sums_[arm] / static_cast<double>(counts_[arm]) : 0.0;
}

double ExperimentState::proportion(int arm) const {
  check(arm);
  return t_ > 0 ? static_cast<double>(counts_[arm]) / static_cast<double>(t_) : 0.0;
}

double ExperimentState::std_error(int arm) const {
  check(arm);
  const double sigma = family_.sigma();  // throws for non-Gaussian families
  return counts_[arm] > 0 ? sigma / std::sqrt(static_cast<double>(counts_[arm])) : kInf;
}

int ExperimentState::empirical_best() const {
  int best = 0;
  double best_mean = mean(0);
  for (int i = 1; i < k_; ++i) {
    const double m = mean(i);
    if (m > best_mean) {
      best = i;
      best_mean = m;
    }
  }
  return best;
}

double ExperimentState::z_statistic(int i, int j) const {
  check(i);
  check(j);
  if (!family_.is_gaussian())
    throw std::logic_error("ExperimentState::z_statistic: Gaussian family only");
  if (counts_[i] == 0 || counts_[j] == 0) return 0.0;
  const double sigma2 = family_.sigma() * family_.sigma();
  const double var = sigma2 / static_cast<double>(counts_[i]) +
                     sigma2 / static_cast<double>(counts_[j]);
  return (mean(i) - mean(j)) / std::sqrt(var);
}

ChernoffResult chernoff_info(const RewardFamily& family, double theta_i, double theta_j,
                             double w_i, double w_j) {
  if (theta_i < theta_j)
    throw std::invalid_argument("chernoff_info: requires theta_i >= theta_j");
  if (w_i < 0.0 || w_j < 0.0)
    throw std::invalid_argument("chernoff_info: weights must be nonnegative");
  if (w_i == 0.0 && w_j == 0.0) return {0.0, theta_j};
  const double bar = (w_i * theta_i + w_j * theta_j) / (w_i + w_j);
  double value = 0.0;
  if (w_i > 0.0) value += w_i * family.kl(theta_i, bar);
  if (w_j > 0.0) value += w_j * family.kl(theta_j, bar);
  return {value, bar};
}

StoppingStatistic stopping_statistic(const ExperimentState& state) {
  const int leader = state.empirical_best();
  const double t = static_cast<double>(state.t());
  double min_d = kInf;
  for (int j = 0; j < state.k(); ++j) {
    if (j == leader) continue;
    double d = 0.0;
    if (state.count(leader) > 0 && state.count(j) > 0) {
      d = chernoff_info(state.family(), state.mean(leader), state.mean(j),
                        state.proportion(leader), state.proportion(j))
              .value;
    }
    if (d < min_d) min_d = d;
  }
  return {leader, t * min_d};
}

}  // namespace adex
