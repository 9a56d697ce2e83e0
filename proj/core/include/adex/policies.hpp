#pragma once

#include <cstdint>
#include <vector>

#include "adex/rng.hpp"
#include "adex/solver.hpp"
#include "adex/state.hpp"

namespace adex {

enum class RuleKind { epsilon_greedy, thompson_sampling, top_two_ts, direct_tracking };
enum class CoinKind { cost_aware, fixed_beta };
enum class SamplerKind { rejection, exact_probabilities };

// Configuration of an anytime allocation rule. Rules consume only the history
// (through ExperimentState); the population size never enters here.
struct RuleConfig {
  RuleKind kind = RuleKind::top_two_ts;
  double epsilon = 0.1;                                 // epsilon_greedy
  CoinKind coin = CoinKind::fixed_beta;                 // top_two_ts
  double beta = 0.5;                                    // fixed_beta coin
  SamplerKind sampler = SamplerKind::exact_probabilities;
  int max_tries = 1000;                                 // rejection resampling cap
  std::int64_t batch = 1;                               // statistic refresh period B
  CostModel costs = CostModel::unit();                  // cost_aware coin / tracking

  static RuleConfig make_epsilon_greedy(double epsilon);
  static RuleConfig make_thompson(std::int64_t batch = 1);
  static RuleConfig make_top_two_fixed(double beta,
                                       SamplerKind sampler = SamplerKind::exact_probabilities,
                                       std::int64_t batch = 1);
  static RuleConfig make_top_two_cost_aware(CostModel costs,
                                            SamplerKind sampler = SamplerKind::exact_probabilities,
                                            std::int64_t batch = 1);
  static RuleConfig make_direct_tracking(CostModel costs, std::int64_t batch = 1);
};

// Epsilon-greedy draw: empirical-best arm with probability 1 - epsilon
// (unsampled arms read mean 0 per the state sentinel; lowest index on ties),
// otherwise a uniform arm.
int epsilon_greedy_arm(const ExperimentState& state, double epsilon, Rng& rng);

// Posterior probability that each arm has the largest posterior sample under
// independent Normal(m_i, s_i^2) improper-prior posteriors, by Gauss-Hermite
// quadrature. Gaussian family only. If some arm is unsampled, all mass goes
// to the lowest-index unsampled arm (the improper-prior +/-infinity draw
// convention, resolved deterministically).
std::vector<double> optimality_probabilities(const ExperimentState& state, int nodes = 64);

// Log-scale Laplace approximations of the same probabilities. These stay
// meaningful far below the absolute floor of the quadrature (values like
// e^-500 keep their relative order), which is what the exact top-two
// challenger draw needs once the posterior has concentrated. Requires every
// arm sampled; Gaussian family only.
std::vector<double> log_optimality_probabilities(const ExperimentState& state);

// Cost-aware coin bias h_{t,i,j} from empirical proportions and plug-in
// within-experiment costs; 1/2 when either arm has never been sampled.
double cost_aware_coin(double prop_i, double cost_i, double prop_j, double cost_j);

// Exponential-family generalization of the coin, built from KL terms against
// the count-weighted mean. Requires positive counts on both arms and distinct
// empirical means; callers must substitute 1/2 when a count is zero. This
// variant has no convergence guarantee yet and is considered experimental.
double ef_coin_bias(const ExperimentState& state, const CostModel& costs, int i, int j);

struct TopTwoDraw {
  int leader;
  int challenger;
};

// A rule instance owns its mutable memo (statistic snapshot, tracking target,
// fallback counter) and serves exactly one trajectory.
class AllocationPolicy {
 public:
  AllocationPolicy(RuleConfig config, RewardFamily family, int k);

  int choose(const ExperimentState& state, Rng& rng);

  // The (leader, challenger) pair before the coin flip; top_two_ts only.
  TopTwoDraw draw_top_two(const ExperimentState& state, Rng& rng);

  // Number of times the rejection sampler hit its cap and fell back.
  std::int64_t fallback_count() const { return fallbacks_; }

  // Forces the statistic snapshot to refresh on the next draw.
  void invalidate_snapshot() { snap_valid_ = false; }

  // Direct-tracking target allocation p_hat (uniform until first solve).
  const std::vector<double>& tracking_target() const { return p_hat_; }

 private:
  void refresh_snapshot(const ExperimentState& state);
  void ensure_alpha();
  void ensure_log_alpha();
  int draw_challenger(int leader, Rng& rng);
  int ts_draw(Rng& rng) const;
  int choose_top_two(const ExperimentState& state, Rng& rng);
  int choose_tracking(const ExperimentState& state, Rng& rng);

  RuleConfig cfg_;
  RewardFamily family_;
  int k_;

  // Statistic snapshot, refreshed every cfg_.batch steps.
  bool snap_valid_ = false;
  std::int64_t snap_t_ = -1;
  std::vector<double> snap_mean_;
  std::vector<double> snap_sd_;
  std::vector<double> snap_prop_;
  std::vector<double> snap_cost_;
  std::vector<double> snap_alpha_;
  bool alpha_valid_ = false;
  std::vector<double> snap_log_alpha_;
  bool log_alpha_valid_ = false;

  // Direct-tracking memo.
  std::vector<double> p_hat_;
  bool solved_once_ = false;
  std::int64_t last_solve_t_ = 0;

  std::int64_t fallbacks_ = 0;
};

}  // namespace adex
