#pragma once

#include <functional>
#include <span>
#include <vector>

#include "adex/exp_family.hpp"

namespace adex {

enum class CostKind { length_regret, unit, per_arm, custom };

// Per-arm within-experiment cost C_i(theta) and post-experiment cost
// Delta_i(theta), evaluable at any mean vector (e.g. plug-in empirical means).
//
//   length_regret(c): C_i = c + (max theta - theta_i), Delta_i = max theta - theta_i
//   unit:             C_i = 1,                         Delta_i = 1{theta_i < max theta}
//   per_arm(c_i):     C_i = c_i,                       Delta_i = 1{theta_i < max theta}
//   custom:           caller-supplied evaluators; they must be deterministic
//                     pure functions of the mean vector (continuity is a
//                     caller obligation and is not checked).
class CostModel {
 public:
  using Evaluator = std::function<double(std::span<const double>, int)>;

  static CostModel length_regret(double c);
  static CostModel unit();
  static CostModel per_arm(std::vector<double> costs);
  static CostModel custom(Evaluator within, Evaluator post);

  CostKind kind() const { return kind_; }
  // The length penalty c; only meaningful for the length_regret kind.
  double length_cost() const;

  double within(std::span<const double> means, int arm) const;
  double post(std::span<const double> means, int arm) const;

 private:
  CostModel() = default;
  CostKind kind_ = CostKind::unit;
  double c_ = 1.0;
  std::vector<double> per_arm_;
  Evaluator within_fn_;
  Evaluator post_fn_;
};

// The offline oracle's output: the experimenter's optimal allocation and the
// skeptic's equilibrium mixture over the k-1 hard alternative instances.
struct OptimalAllocation {
  int best = 0;                         // I*
  std::vector<double> p_star;           // optimal allocation, sums to 1, > 0
  std::vector<double> q_star;           // skeptic's mixture; q_star[best] = 0
  std::vector<std::vector<double>> alternatives;  // alternatives[j], j != best
  double y_star = 0.0;                  // root of F_theta(y) = 1
  double equilibrium_value = 0.0;       // Gamma*
  double lai_robbins_constant = 0.0;    // kappa = 1 / Gamma*
  double balance_residual = 0.0;        // max_{i,j} |D_i - D_j| / max D
  double exploitation_residual = 0.0;   // |F(y*) - 1| at the returned p
};

// g_j(x) = KL(th*, w) + x KL(th_j, w) with w = (th* + x th_j) / (1 + x);
// strictly increasing from 0 to KL(th*, th_j).
double g_value(const Instance& instance, int j, double x);

// Inverse of g_j by bisection, relative tolerance 1e-12. Requires
// 0 <= y < KL(th*, th_j).
double g_inverse(const Instance& instance, int j, double y);

// Solve for the unique allocation satisfying information balance and the
// cost-aware exploitation-rate condition, plus the induced equilibrium data.
OptimalAllocation solve_p_star(const Instance& instance, const CostModel& costs);

// The information-balanced allocation with exploitation rate fixed to beta.
std::vector<double> solve_p_beta(const Instance& instance, double beta);

// Experimenter's payoff Gamma_theta(p, alt) against a pure alternative.
double payoff(const Instance& instance, const CostModel& costs,
              std::span<const double> p, std::span<const double> alternative);

// Optimal exploitation rate for the length-regret objective with penalty c.
double beta_c(const Instance& instance, double c);

}  // namespace adex
