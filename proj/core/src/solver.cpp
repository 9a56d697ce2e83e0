#include "adex/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adex {

namespace {

double max_of(std::span<const double> v) {
  double best = v[0];
  for (double x : v) best = std::max(best, x);
  return best;
}

}  // namespace

CostModel CostModel::length_regret(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("CostModel::length_regret: c must be positive");
  CostModel m;
  m.kind_ = CostKind::length_regret;
  m.c_ = c;
  return m;
}

CostModel CostModel::unit() {
  CostModel m;
  m.kind_ = CostKind::unit;
  return m;
}

CostModel CostModel::per_arm(std::vector<double> costs) {
  for (double c : costs)
    if (!(c > 0.0)) throw std::invalid_argument("CostModel::per_arm: costs must be positive");
  CostModel m;
  m.kind_ = CostKind::per_arm;
  m.per_arm_ = std::move(costs);
  return m;
}

CostModel CostModel::custom(Evaluator within, Evaluator post) {
  if (!within || !post) throw std::invalid_argument("CostModel::custom: missing evaluator");
  CostModel m;
  m.kind_ = CostKind::custom;
  m.within_fn_ = std::move(within);
  m.post_fn_ = std::move(post);
  return m;
}

double CostModel::length_cost() const {
  if (kind_ != CostKind::length_regret)
    throw std::logic_error("CostModel::length_cost: only defined for length_regret");
  return c_;
}

double CostModel::within(std::span<const double> means, int arm) const {
  switch (kind_) {
    case CostKind::length_regret: return c_ + (max_of(means) - means[arm]);
    case CostKind::unit: return 1.0;
    case CostKind::per_arm:
      if (static_cast<std::size_t>(arm) >= per_arm_.size())
        throw std::out_of_range("CostModel::within: arm index");
      return per_arm_[arm];
    case CostKind::custom: return within_fn_(means, arm);
  }
  return 1.0;
}

double CostModel::post(std::span<const double> means, int arm) const {
  switch (kind_) {
    case CostKind::length_regret: return max_of(means) - means[arm];
    case CostKind::unit:
    case CostKind::per_arm: return means[arm] < max_of(means) ? 1.0 : 0.0;
    case CostKind::custom: return post_fn_(means, arm);
  }
  return 0.0;
}

namespace {

// Mixture mean (th* + x th_j) / (1 + x), written to stay stable for huge x.
double mixture_mean(double th_star, double th_j, double x) {
  return th_j + (th_star - th_j) / (1.0 + x);
}

struct SolveContext {
  const Instance& instance;
  int best;
  std::vector<double> kl_star;  // KL(th*, th_j), j != best

  explicit SolveContext(const Instance& inst) : instance(inst), best(inst.best_arm()) {
    kl_star.assign(inst.k(), 0.0);
    for (int j = 0; j < inst.k(); ++j) {
      if (j == best) continue;
      kl_star[j] = inst.family().kl(inst.means()[best], inst.means()[j]);
    }
  }

  double y_max() const {
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < instance.k(); ++j)
      if (j != best) m = std::min(m, kl_star[j]);
    return m;
  }
};

double g_eval(const Instance& instance, int best, int j, double x) {
  const double th_star = instance.means()[best];
  const double th_j = instance.means()[j];
  const double w = mixture_mean(th_star, th_j, x);
  return instance.family().kl(th_star, w) + x * instance.family().kl(th_j, w);
}

double g_invert(const Instance& instance, int best, int j, double y, double kl_star_j) {
  if (!(y >= 0.0) || y >= kl_star_j)
    throw std::out_of_range("g_inverse: y must lie in [0, KL(theta*, theta_j)); y=" +
                            std::to_string(y) + " bound=" + std::to_string(kl_star_j) +
                            " j=" + std::to_string(j));
  if (y == 0.0) return 0.0;
  double hi = 1.0;
  int guard = 0;
  while (g_eval(instance, best, j, hi) < y) {
    hi *= 2.0;
    if (++guard > 80) throw std::runtime_error("g_inverse: bracket expansion failed");
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g_eval(instance, best, j, mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double g_value(const Instance& instance, int j, double x) {
  const int best = instance.best_arm();
  if (j == best || j < 0 || j >= instance.k())
    throw std::out_of_range("g_value: j must be a suboptimal arm index");
  if (!(x >= 0.0)) throw std::invalid_argument("g_value: x must be nonnegative");
  return g_eval(instance, best, j, x);
}

double g_inverse(const Instance& instance, int j, double y) {
  const int best = instance.best_arm();
  if (j == best || j < 0 || j >= instance.k())
    throw std::out_of_range("g_inverse: j must be a suboptimal arm index");
  const double kl_star_j = instance.family().kl(instance.means()[best], instance.means()[j]);
  return g_invert(instance, best, j, y, kl_star_j);
}

OptimalAllocation solve_p_star(const Instance& instance, const CostModel& costs) {
  if (!instance.has_unique_best())
    throw std::invalid_argument("solve_p_star: instance must have a unique best arm");
  const SolveContext ctx(instance);
  const int k = instance.k();
  const int best = ctx.best;
  const auto& means = instance.means();

  std::vector<double> cost(k);
  for (int i = 0; i < k; ++i) {
    cost[i] = costs.within(means, i);
    if (!(cost[i] > 0.0) || !std::isfinite(cost[i]))
      throw std::invalid_argument("solve_p_star: within-experiment costs must be positive");
  }

  // F(y) = sum_j (C_j / C_*) KL(th*, w_j(y)) / KL(th_j, w_j(y)); strictly
  // increasing with F(0) = 0 and F -> inf at y_max.
  auto F = [&](double y) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == best) continue;
      const double x = g_invert(instance, best, j, y, ctx.kl_star[j]);
      const double w = mixture_mean(means[best], means[j], x);
      s += (cost[j] / cost[best]) * instance.family().kl(means[best], w) /
           instance.family().kl(means[j], w);
    }
    return s;
  };

  const double y_max = ctx.y_max();
  double hi = (1.0 - 1e-9) * y_max;
  int guard = 0;
  while (F(hi) < 1.0) {
    hi = y_max - (y_max - hi) / 8.0;
    if (++guard > 60 || !(hi < y_max))
      throw std::runtime_error("solve_p_star: root bracketing failed");
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) < 1.0 ? lo : hi) = mid;
  }
  const double y_star = 0.5 * (lo + hi);

  std::vector<double> x(k, 0.0);
  x[best] = 1.0;
  double total = 1.0;
  for (int j = 0; j < k; ++j) {
    if (j == best) continue;
    x[j] = g_invert(instance, best, j, y_star, ctx.kl_star[j]);
    total += x[j];
  }

  OptimalAllocation out;
  out.best = best;
  out.y_star = y_star;
  out.p_star.assign(k, 0.0);
  for (int i = 0; i < k; ++i) out.p_star[i] = x[i] / total;

  out.q_star.assign(k, 0.0);
  out.alternatives.assign(k, {});
  double kappa = 0.0;
  for (int j = 0; j < k; ++j) {
    if (j == best) continue;
    const double bar = (out.p_star[best] * means[best] + out.p_star[j] * means[j]) /
                       (out.p_star[best] + out.p_star[j]);
    kappa += cost[j] / instance.family().kl(means[j], bar);
    std::vector<double> alt = means;
    alt[best] = bar;
    alt[j] = bar;
    out.alternatives[j] = std::move(alt);
  }
  out.lai_robbins_constant = kappa;
  out.equilibrium_value = 1.0 / kappa;
  for (int j = 0; j < k; ++j) {
    if (j == best) continue;
    const double bar = out.alternatives[j][best];
    out.q_star[j] = cost[j] / instance.family().kl(means[j], bar) * out.equilibrium_value;
  }

  // Diagnostics against the two defining conditions.
  double d_min = std::numeric_limits<double>::infinity();
  double d_max = 0.0;
  double f_at_p = 0.0;
  for (int j = 0; j < k; ++j) {
    if (j == best) continue;
    const double bar = out.alternatives[j][best];
    const double d = out.p_star[best] * instance.family().kl(means[best], bar) +
                     out.p_star[j] * instance.family().kl(means[j], bar);
    d_min = std::min(d_min, d);
    d_max = std::max(d_max, d);
    f_at_p += (cost[j] / cost[best]) * instance.family().kl(means[best], bar) /
              instance.family().kl(means[j], bar);
  }
  out.balance_residual = d_max > 0.0 ? (d_max - d_min) / d_max : 0.0;
  out.exploitation_residual = std::abs(f_at_p - 1.0);
  return out;
}

std::vector<double> solve_p_beta(const Instance& instance, double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("solve_p_beta: beta must lie in (0,1)");
  if (!instance.has_unique_best())
    throw std::invalid_argument("solve_p_beta: instance must have a unique best arm");
  const SolveContext ctx(instance);
  const int k = instance.k();
  const int best = ctx.best;

  // sum_j x_j(y) is strictly increasing from 0 to infinity on [0, y_max).
  auto total_x = [&](double y) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == best) continue;
      s += g_invert(instance, best, j, y, ctx.kl_star[j]);
    }
    return s;
  };

  const double target = (1.0 - beta) / beta;
  const double y_max = ctx.y_max();
  double hi = 0.5 * y_max;
  int guard = 0;
  while (total_x(hi) < target) {
    hi = y_max - (y_max - hi) / 8.0;
    if (++guard > 60 || !(hi < y_max))
      throw std::runtime_error("solve_p_beta: root bracketing failed");
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total_x(mid) < target ? lo : hi) = mid;
  }
  const double y = 0.5 * (lo + hi);

  std::vector<double> p(k, 0.0);
  p[best] = beta;
  for (int j = 0; j < k; ++j) {
    if (j == best) continue;
    p[j] = beta * g_invert(instance, best, j, y, ctx.kl_star[j]);
  }
  return p;
}

double payoff(const Instance& instance, const CostModel& costs,
              std::span<const double> p, std::span<const double> alternative) {
  const int k = instance.k();
  if (static_cast<int>(p.size()) != k || static_cast<int>(alternative.size()) != k)
    throw std::invalid_argument("payoff: dimension mismatch");
  double info = 0.0;
  double spend = 0.0;
  for (int i = 0; i < k; ++i) {
    if (p[i] > 0.0) info += p[i] * instance.family().kl(instance.means()[i], alternative[i]);
    spend += p[i] * costs.within(instance.means(), i);
  }
  return info / spend;
}

double beta_c(const Instance& instance, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("beta_c: c must be positive");
  const OptimalAllocation a = solve_p_star(instance, CostModel::length_regret(c));
  return a.p_star[a.best];
}

}  // namespace adex
