#pragma once

#include <vector>

#include "adex/rng.hpp"

namespace adex {

enum class FamilyKind { gaussian, bernoulli, poisson };

// One-dimensional exponential-family reward model, parameterized by its mean.
// The mean is the only public parameterization; natural parameters stay
// internal to the KL and derivative formulas.
class RewardFamily {
 public:
  static RewardFamily gaussian(double sigma);
  static RewardFamily bernoulli() { return RewardFamily(FamilyKind::bernoulli, 0.0); }
  static RewardFamily poisson() { return RewardFamily(FamilyKind::poisson, 0.0); }

  FamilyKind kind() const { return kind_; }
  bool is_gaussian() const { return kind_ == FamilyKind::gaussian; }

  // Known standard deviation; only meaningful for the Gaussian family.
  double sigma() const;

  // Open natural-parameter domain: Gaussian means are unrestricted, Bernoulli
  // means lie in (0,1), Poisson means are strictly positive.
  bool in_domain(double mean) const;
  void require_in_domain(double mean) const;

  // KL(P(.|a) || P(.|b)) in the mean parameterization. Accepts arguments on
  // the closure of the domain, taking limits there, because empirical means
  // of Bernoulli/Poisson samples can sit on the boundary: KL(0,b) is finite
  // while KL(a,0) = +infinity for a > 0.
  double kl(double a, double b) const;

  // d eta / d theta = 1 / Var(theta); strictly positive on the open domain.
  double eta_derivative(double mean) const;

  // Variance of the reward distribution at the given mean.
  double variance_at(double mean) const { return 1.0 / eta_derivative(mean); }

  // One draw from P(.|mean).
  double sample(double mean, Rng& rng) const;

 private:
  RewardFamily(FamilyKind kind, double sigma) : kind_(kind), sigma_(sigma) {}

  // Boundary-inclusive domain used by kl().
  bool in_closed_domain(double mean) const;

  FamilyKind kind_;
  double sigma_;
};

// A problem instance: the reward family plus the vector of true arm means.
class Instance {
 public:
  Instance(RewardFamily family, std::vector<double> means);

  const RewardFamily& family() const { return family_; }
  const std::vector<double>& means() const { return means_; }
  int k() const { return static_cast<int>(means_.size()); }

  double max_mean() const;
  bool has_unique_best() const;
  // Index of the unique best arm; throws std::logic_error when the maximum
  // is attained by more than one arm.
  int best_arm() const;
  // Optimality gap of arm j relative to the unique best arm.
  double gap(int j) const;

 private:
  RewardFamily family_;
  std::vector<double> means_;
};

}  // namespace adex
