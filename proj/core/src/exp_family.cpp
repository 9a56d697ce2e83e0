#include "adex/exp_family.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace adex {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RewardFamily RewardFamily::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("RewardFamily::gaussian: sigma must be positive");
  return RewardFamily(FamilyKind::gaussian, sigma);
}

double RewardFamily::sigma() const {
  if (kind_ != FamilyKind::gaussian)
    throw std::logic_error("RewardFamily::sigma: only defined for the Gaussian family");
  return sigma_;
}

bool RewardFamily::in_domain(double mean) const {
  if (!std::isfinite(mean)) return false;
  switch (kind_) {
    case FamilyKind::gaussian: return true;
    case FamilyKind::bernoulli: return mean > 0.0 && mean < 1.0;
    case FamilyKind::poisson: return mean > 0.0;
  }
  return false;
}

bool RewardFamily::in_closed_domain(double mean) const {
  if (!std::isfinite(mean)) return false;
  switch (kind_) {
    case FamilyKind::gaussian: return true;
    case FamilyKind::bernoulli: return mean >= 0.0 && mean <= 1.0;
    case FamilyKind::poisson: return mean >= 0.0;
  }
  return false;
}

void RewardFamily::require_in_domain(double mean) const {
  if (!in_domain(mean))
    throw std::invalid_argument("RewardFamily: mean outside the open parameter domain");
}

double RewardFamily::kl(double a, double b) const {
  if (!in_closed_domain(a) || !in_closed_domain(b))
    throw std::invalid_argument("RewardFamily::kl: argument outside the parameter domain");
  if (a == b) return 0.0;
  switch (kind_) {
    case FamilyKind::gaussian: {
      const double d = a - b;
      return d * d / (2.0 * sigma_ * sigma_);
    }
    case FamilyKind::bernoulli: {
      if (b <= 0.0 || b >= 1.0) return kInf;  // a != b on the boundary
      // log1p forms avoid the cancellation that can flip the sign of the
      // O((a-b)^2) result when a and b are close.
      const double d = a - b;
      double out = 0.0;
      if (a > 0.0) out += a * std::log1p(d / b);
      if (a < 1.0) out += (1.0 - a) * std::log1p(-d / (1.0 - b));
      return std::max(out, 0.0);
    }
    case FamilyKind::poisson: {
      if (b <= 0.0) return kInf;
      if (a == 0.0) return b;
      return std::max(a * std::log1p((a - b) / b) - (a - b), 0.0);
    }
  }
  return 0.0;
}

double RewardFamily::eta_derivative(double mean) const {
  require_in_domain(mean);
  switch (kind_) {
    case FamilyKind::gaussian: return 1.0 / (sigma_ * sigma_);
    case FamilyKind::bernoulli: return 1.0 / (mean * (1.0 - mean));
    case FamilyKind::poisson: return 1.0 / mean;
  }
  return 0.0;
}

double RewardFamily::sample(double mean, Rng& rng) const {
  require_in_domain(mean);
  switch (kind_) {
    case FamilyKind::gaussian: return mean + sigma_ * rng.normal();
    case FamilyKind::bernoulli: return rng.bernoulli(mean) ? 1.0 : 0.0;
    case FamilyKind::poisson: return static_cast<double>(rng.poisson(mean));
  }
  return 0.0;
}

Instance::Instance(RewardFamily family, std::vector<double> means)
    : family_(family), means_(std::move(means)) {
  if (means_.size() < 2)
    throw std::invalid_argument("Instance: need at least two arms");
  for (double m : means_) family_.require_in_domain(m);
}

double Instance::max_mean() const {
  double best = means_[0];
  for (double m : means_)
    if (m > best) best = m;
  return best;
}

bool Instance::has_unique_best() const {
  const double best = max_mean();
  int hits = 0;
  for (double m : means_)
    if (m == best) ++hits;
  return hits == 1;
}

int Instance::best_arm() const {
  if (!has_unique_best())
    throw std::logic_error("Instance::best_arm: maximum mean is not unique");
  const double best = max_mean();
  for (int i = 0; i < k(); ++i)
    if (means_[i] == best) return i;
  return 0;  // unreachable
}

double Instance::gap(int j) const {
  if (j < 0 || j >= k()) throw std::out_of_range("Instance::gap: arm index");
  return means_[best_arm()] - means_[j];
}

}  // namespace adex
