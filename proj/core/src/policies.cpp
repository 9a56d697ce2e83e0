#include "adex/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "adex/quadrature.hpp"
#include "adex/stopping.hpp"

namespace adex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Handoff point for challenger weights: the quadrature's absolute error is
// around 1e-13, so below this leftover mass its ratios start to degrade and
// the log-scale Laplace weights take over.
constexpr double kChallengerFloor = 1e-9;

// Posterior scale for Thompson draws. Gaussian uses the exact improper-prior
// standard error; other families use a normal approximation with the
// variance function evaluated at the empirical mean, smoothed toward the
// interior so a boundary mean keeps positive posterior variance.
double posterior_scale(const RewardFamily& family, double mean, std::int64_t n) {
  if (n == 0) return kInf;
  double v = 0.0;
  switch (family.kind()) {
    case FamilyKind::gaussian:
      v = family.sigma() * family.sigma();
      break;
    case FamilyKind::bernoulli: {
      const double eps = 1.0 / static_cast<double>(n + 2);
      const double m = std::clamp(mean, eps, 1.0 - eps);
      v = m * (1.0 - m);
      break;
    }
    case FamilyKind::poisson: {
      const double m = std::max(mean, 1.0 / static_cast<double>(n + 2));
      v = m;
      break;
    }
  }
  return std::sqrt(v / static_cast<double>(n));
}

int lowest_unsampled(const ExperimentState& state) {
  for (int i = 0; i < state.k(); ++i)
    if (state.count(i) == 0) return i;
  return -1;
}

int draw_categorical(const std::vector<double>& w, Rng& rng) {
  double total = 0.0;
  for (double x : w) total += x;
  double u = rng.uniform() * total;
  int last_positive = 0;
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    if (w[i] <= 0.0) continue;
    last_positive = i;
    u -= w[i];
    if (u < 0.0) return i;
  }
  return last_positive;
}

double normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

// P(arm i posterior draw beats all others), by a single Hermite rule in arm
// i's posterior measure. Accurate while no competing posterior is much
// narrower than arm i's (the CDF wall must be resolvable by the rule).
double alpha_hermite(int i, const std::vector<double>& m, const std::vector<double>& s,
                     int nodes) {
  const auto& gh = gauss_hermite(nodes);
  const int k = static_cast<int>(m.size());
  double acc = 0.0;
  for (std::size_t q = 0; q < gh.nodes.size(); ++q) {
    const double x = m[i] + std::numbers::sqrt2 * s[i] * gh.nodes[q];
    double prod = gh.weights[q];
    for (int j = 0; j < k && prod > 0.0; ++j) {
      if (j == i) continue;
      prod *= normal_cdf((x - m[j]) / s[j]);
    }
    acc += prod;
  }
  return acc / std::sqrt(std::numbers::pi);
}

// Same integral by a composite Legendre rule over panels that resolve every
// competitor's own scale; used when a competitor is much narrower than arm i,
// where a single Hermite rule cannot see the sharp CDF wall.
double alpha_panels(int i, const std::vector<double>& m, const std::vector<double>& s) {
  const int k = static_cast<int>(m.size());
  const double lo = m[i] - 9.5 * s[i];
  const double hi = m[i] + 9.5 * s[i];

  std::vector<double> cuts = {lo, hi};
  static const double kOffsets[] = {-8, -6, -4, -3, -2, -1, 0, 1, 2, 3, 4, 6, 8};
  for (int j = 0; j < k; ++j) {
    if (j == i) continue;
    for (double c : kOffsets) {
      const double x = m[j] + c * s[j];
      if (x > lo && x < hi) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  auto competitors_cdf = [&](double x) {
    double prod = 1.0;
    for (int j = 0; j < k && prod > 0.0; ++j) {
      if (j == i) continue;
      prod *= normal_cdf((x - m[j]) / s[j]);
    }
    return prod;
  };

  const auto& gl = gauss_legendre(24);
  double alpha = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c];
    const double b = cuts[c + 1];
    if (b - a <= 1e-14 * s[i]) continue;
    // Split long stretches so the panel also resolves arm i's own scale.
    const int chunks = std::max(1, static_cast<int>(std::ceil((b - a) / (1.5 * s[i]))));
    for (int ch = 0; ch < chunks; ++ch) {
      const double pa = a + (b - a) * ch / chunks;
      const double pb = a + (b - a) * (ch + 1) / chunks;
      // The product CDF is increasing, so its value at the right edge bounds
      // the panel; skip panels that cannot contribute.
      const double phi_max =
          (m[i] >= pa && m[i] <= pb)
              ? normal_pdf(m[i], m[i], s[i])
              : std::max(normal_pdf(pa, m[i], s[i]), normal_pdf(pb, m[i], s[i]));
      if ((pb - pa) * phi_max * competitors_cdf(pb) < 1e-17) continue;
      double acc = 0.0;
      for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        const double x = 0.5 * (pa + pb) + 0.5 * (pb - pa) * gl.nodes[q];
        acc += gl.weights[q] * normal_pdf(x, m[i], s[i]) * competitors_cdf(x);
      }
      alpha += 0.5 * (pb - pa) * acc;
    }
  }
  return alpha;
}

std::vector<double> alpha_from_moments(const std::vector<double>& m,
                                       const std::vector<double>& s, int nodes) {
  const int k = static_cast<int>(m.size());
  std::vector<double> alpha(k, 0.0);
  for (int i = 0; i < k; ++i) {
    double narrowest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j)
      if (j != i) narrowest = std::min(narrowest, s[j]);
    alpha[i] = s[i] <= 1.5 * narrowest ? alpha_hermite(i, m, s, nodes)
                                       : alpha_panels(i, m, s);
  }
  return alpha;
}

// Laplace approximation of ln alpha_i. The log-integrand
//   f(x) = ln phi((x-m_i)/s_i) - ln s_i + sum_{j!=i} ln Phi((x-m_j)/s_j)
// is strictly concave, so the mode is a bisection on f'. Used for challenger
// weights once the true probabilities sit below what absolute quadrature can
// resolve; only ratios matter there, and those are carried by the exponent.
double log_alpha_laplace(int i, const std::vector<double>& m, const std::vector<double>& s) {
  const int k = static_cast<int>(m.size());
  const auto hazard = [](double u) {
    // phi(u)/Phi(u), stable for u far below zero.
    const double log_phi = -0.5 * u * u - 0.5 * std::log(2.0 * std::numbers::pi);
    return std::exp(log_phi - log_normal_cdf(u));
  };
  const auto fprime = [&](double x) {
    double d = -(x - m[i]) / (s[i] * s[i]);
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      d += hazard((x - m[j]) / s[j]) / s[j];
    }
    return d;
  };

  // f'(m_i) > 0; expand right until f' < 0, then bisect.
  double lo = m[i];
  double span = s[i];
  for (int j = 0; j < k; ++j) span = std::max(span, s[j]);
  double hi = m[i];
  for (int j = 0; j < k; ++j) hi = std::max(hi, m[j]);
  hi += span;
  int guard = 0;
  while (fprime(hi) > 0.0) {
    hi += span;
    span *= 2.0;
    if (++guard > 100) break;
  }
  for (int it = 0; it < 100 && hi - lo > 1e-10 * (std::abs(hi) + span); ++it) {
    const double mid = 0.5 * (lo + hi);
    (fprime(mid) > 0.0 ? lo : hi) = mid;
  }
  const double x_hat = 0.5 * (lo + hi);

  const double u_i = (x_hat - m[i]) / s[i];
  double f = -0.5 * u_i * u_i - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(s[i]);
  double curv = -1.0 / (s[i] * s[i]);
  for (int j = 0; j < k; ++j) {
    if (j == i) continue;
    const double u = (x_hat - m[j]) / s[j];
    f += log_normal_cdf(u);
    const double h = hazard(u);
    curv -= h * (u + h) / (s[j] * s[j]);
  }
  return f + 0.5 * std::log(2.0 * std::numbers::pi / -curv);
}

}  // namespace

RuleConfig RuleConfig::make_epsilon_greedy(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("RuleConfig: epsilon must lie in [0,1]");
  RuleConfig c;
  c.kind = RuleKind::epsilon_greedy;
  c.epsilon = epsilon;
  return c;
}

RuleConfig RuleConfig::make_thompson(std::int64_t batch) {
  RuleConfig c;
  c.kind = RuleKind::thompson_sampling;
  c.batch = batch;
  return c;
}

RuleConfig RuleConfig::make_top_two_fixed(double beta, SamplerKind sampler, std::int64_t batch) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("RuleConfig: beta must lie in (0,1)");
  RuleConfig c;
  c.kind = RuleKind::top_two_ts;
  c.coin = CoinKind::fixed_beta;
  c.beta = beta;
  c.sampler = sampler;
  c.batch = batch;
  return c;
}

RuleConfig RuleConfig::make_top_two_cost_aware(CostModel costs, SamplerKind sampler,
                                               std::int64_t batch) {
  RuleConfig c;
  c.kind = RuleKind::top_two_ts;
  c.coin = CoinKind::cost_aware;
  c.sampler = sampler;
  c.batch = batch;
  c.costs = std::move(costs);
  return c;
}

RuleConfig RuleConfig::make_direct_tracking(CostModel costs, std::int64_t batch) {
  RuleConfig c;
  c.kind = RuleKind::direct_tracking;
  c.batch = batch;
  c.costs = std::move(costs);
  return c;
}

int epsilon_greedy_arm(const ExperimentState& state, double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon_greedy_arm: epsilon must lie in [0,1]");
  if (rng.uniform() < epsilon) return rng.uniform_int(state.k());
  return state.empirical_best();
}

std::vector<double> optimality_probabilities(const ExperimentState& state, int nodes) {
  if (!state.family().is_gaussian())
    throw std::logic_error("optimality_probabilities: Gaussian family only");
  const int k = state.k();
  const int unsampled = lowest_unsampled(state);
  if (unsampled >= 0) {
    std::vector<double> alpha(k, 0.0);
    alpha[unsampled] = 1.0;
    return alpha;
  }
  std::vector<double> m(k), s(k);
  for (int i = 0; i < k; ++i) {
    m[i] = state.mean(i);
    s[i] = state.std_error(i);
  }
  return alpha_from_moments(m, s, nodes);
}

std::vector<double> log_optimality_probabilities(const ExperimentState& state) {
  if (!state.family().is_gaussian())
    throw std::logic_error("log_optimality_probabilities: Gaussian family only");
  const int k = state.k();
  std::vector<double> m(k), s(k);
  for (int i = 0; i < k; ++i) {
    if (state.count(i) == 0)
      throw std::invalid_argument("log_optimality_probabilities: every arm needs a sample");
    m[i] = state.mean(i);
    s[i] = state.std_error(i);
  }
  std::vector<double> out(k, 0.0);
  for (int i = 0; i < k; ++i) out[i] = log_alpha_laplace(i, m, s);
  return out;
}

double cost_aware_coin(double prop_i, double cost_i, double prop_j, double cost_j) {
  const double a = prop_i * cost_i;
  const double b = prop_j * cost_j;
  if (!(a > 0.0) || !(b > 0.0)) return 0.5;
  return b / (a + b);
}

double ef_coin_bias(const ExperimentState& state, const CostModel& costs, int i, int j) {
  if (state.count(i) == 0 || state.count(j) == 0)
    throw std::invalid_argument("ef_coin_bias: both arms need positive counts");
  const double mi = state.mean(i);
  const double mj = state.mean(j);
  if (mi == mj) throw std::invalid_argument("ef_coin_bias: arms have equal empirical means");
  const double pi = state.proportion(i);
  const double pj = state.proportion(j);
  const double bar = (pi * mi + pj * mj) / (pi + pj);
  std::vector<double> means(state.k());
  for (int a = 0; a < state.k(); ++a) means[a] = state.mean(a);
  const double wi = pi * state.family().kl(mi, bar) / costs.within(means, i);
  const double wj = pj * state.family().kl(mj, bar) / costs.within(means, j);
  return wi / (wi + wj);
}

AllocationPolicy::AllocationPolicy(RuleConfig config, RewardFamily family, int k)
    : cfg_(std::move(config)), family_(family), k_(k) {
  if (k < 2) throw std::invalid_argument("AllocationPolicy: need at least two arms");
  if (cfg_.batch < 1) throw std::invalid_argument("AllocationPolicy: batch must be >= 1");
  if (cfg_.kind == RuleKind::epsilon_greedy &&
      !(cfg_.epsilon >= 0.0 && cfg_.epsilon <= 1.0))
    throw std::invalid_argument("AllocationPolicy: epsilon must lie in [0,1]");
  if (cfg_.kind == RuleKind::top_two_ts && cfg_.coin == CoinKind::fixed_beta &&
      !(cfg_.beta > 0.0 && cfg_.beta < 1.0))
    throw std::invalid_argument("AllocationPolicy: beta must lie in (0,1)");
  p_hat_.assign(k, 1.0 / k);
}

void AllocationPolicy::refresh_snapshot(const ExperimentState& state) {
  snap_mean_.assign(k_, 0.0);
  snap_sd_.assign(k_, 0.0);
  snap_prop_.assign(k_, 0.0);
  for (int i = 0; i < k_; ++i) {
    snap_mean_[i] = state.mean(i);
    snap_sd_[i] = posterior_scale(family_, snap_mean_[i], state.count(i));
    snap_prop_[i] = state.proportion(i);
  }
  snap_cost_.assign(k_, 1.0);
  if (cfg_.kind == RuleKind::top_two_ts && cfg_.coin == CoinKind::cost_aware) {
    for (int i = 0; i < k_; ++i) snap_cost_[i] = cfg_.costs.within(snap_mean_, i);
  }
  snap_t_ = state.t();
  snap_valid_ = true;
  alpha_valid_ = false;
  log_alpha_valid_ = false;
}

void AllocationPolicy::ensure_alpha() {
  if (alpha_valid_) return;
  if (!family_.is_gaussian())
    throw std::logic_error("AllocationPolicy: exact top-two probabilities are Gaussian-only");
  snap_alpha_ = alpha_from_moments(snap_mean_, snap_sd_, 64);
  alpha_valid_ = true;
}

void AllocationPolicy::ensure_log_alpha() {
  if (log_alpha_valid_) return;
  snap_log_alpha_.assign(k_, 0.0);
  for (int i = 0; i < k_; ++i) snap_log_alpha_[i] = log_alpha_laplace(i, snap_mean_, snap_sd_);
  log_alpha_valid_ = true;
}

// Challenger from alpha_j / (1 - alpha_leader). Once that leftover mass drops
// below what the quadrature resolves in absolute terms, the ratios are
// recovered from log-scale Laplace weights instead, which keep the relative
// ordering of the tiny tail probabilities intact.
int AllocationPolicy::draw_challenger(int leader, Rng& rng) {
  std::vector<double> rest = snap_alpha_;
  rest[leader] = 0.0;
  double total = 0.0;
  for (double w : rest) total += w;
  if (total > kChallengerFloor) return draw_categorical(rest, rng);

  ensure_log_alpha();
  double top = -kInf;
  for (int j = 0; j < k_; ++j)
    if (j != leader) top = std::max(top, snap_log_alpha_[j]);
  if (std::isfinite(top)) {
    std::vector<double> w(k_, 0.0);
    for (int j = 0; j < k_; ++j)
      if (j != leader) w[j] = std::exp(snap_log_alpha_[j] - top);
    return draw_categorical(w, rng);
  }
  int challenger = rng.uniform_int(k_ - 1);
  if (challenger >= leader) ++challenger;
  return challenger;
}

int AllocationPolicy::ts_draw(Rng& rng) const {
  int best = 0;
  double best_val = -kInf;
  for (int i = 0; i < k_; ++i) {
    const double v = snap_mean_[i] + snap_sd_[i] * rng.normal();
    if (v > best_val) {
      best = i;
      best_val = v;
    }
  }
  return best;
}

TopTwoDraw AllocationPolicy::draw_top_two(const ExperimentState& state, Rng& rng) {
  if (cfg_.kind != RuleKind::top_two_ts)
    throw std::logic_error("AllocationPolicy::draw_top_two: not a top-two rule");
  if (state.k() != k_)
    throw std::invalid_argument("AllocationPolicy::draw_top_two: state arm count mismatch");

  const int unsampled = lowest_unsampled(state);
  if (unsampled >= 0) {
    // Improper-prior convention: unsampled arms rank first, lowest index
    // leading; both slots prefer unsampled arms.
    for (int j = unsampled + 1; j < k_; ++j)
      if (state.count(j) == 0) return {unsampled, j};
    int challenger = rng.uniform_int(k_ - 1);
    if (challenger >= unsampled) ++challenger;
    return {unsampled, challenger};
  }
  if (!snap_valid_ || state.t() - snap_t_ >= cfg_.batch) refresh_snapshot(state);

  int leader = -1;
  int challenger = -1;
  if (cfg_.sampler == SamplerKind::exact_probabilities) {
    ensure_alpha();
    leader = draw_categorical(snap_alpha_, rng);
    challenger = draw_challenger(leader, rng);
  } else {
    leader = ts_draw(rng);
    for (int tries = 0; tries < cfg_.max_tries; ++tries) {
      const int c = ts_draw(rng);
      if (c != leader) {
        challenger = c;
        break;
      }
    }
    if (challenger < 0) {
      ++fallbacks_;
      if (family_.is_gaussian()) {
        ensure_alpha();
        challenger = draw_challenger(leader, rng);
      } else {
        challenger = rng.uniform_int(k_ - 1);
        if (challenger >= leader) ++challenger;
      }
    }
  }
  return {leader, challenger};
}

int AllocationPolicy::choose_top_two(const ExperimentState& state, Rng& rng) {
  const TopTwoDraw draw = draw_top_two(state, rng);
  double h = 0.5;
  if (cfg_.coin == CoinKind::fixed_beta) {
    h = cfg_.beta;
  } else if (state.count(draw.leader) > 0 && state.count(draw.challenger) > 0) {
    h = cost_aware_coin(snap_prop_[draw.leader], snap_cost_[draw.leader],
                        snap_prop_[draw.challenger], snap_cost_[draw.challenger]);
  }
  return rng.uniform() < h ? draw.leader : draw.challenger;
}

int AllocationPolicy::choose_tracking(const ExperimentState& state, Rng&) {
  const double t = static_cast<double>(state.t());
  const double threshold = std::max(std::sqrt(t) - static_cast<double>(k_) / 2.0, 0.0);
  int forced = -1;
  std::int64_t forced_count = 0;
  for (int i = 0; i < k_; ++i) {
    const std::int64_t n = state.count(i);
    if (static_cast<double>(n) <= threshold && (forced < 0 || n < forced_count)) {
      forced = i;
      forced_count = n;
    }
  }
  if (forced >= 0) return forced;

  if (!solved_once_ || state.t() - last_solve_t_ >= cfg_.batch) {
    std::vector<double> means(k_);
    bool valid = true;
    for (int i = 0; i < k_; ++i) {
      means[i] = state.mean(i);
      valid = valid && family_.in_domain(means[i]);
    }
    if (valid) {
      Instance plug(family_, means);
      if (plug.has_unique_best()) {
        p_hat_ = solve_p_star(plug, cfg_.costs).p_star;
        solved_once_ = true;
        last_solve_t_ = state.t();
      }
    }
    // Tied or out-of-domain plug-in means: keep the previous target.
  }

  int arm = 0;
  double best_deficit = -kInf;
  for (int i = 0; i < k_; ++i) {
    const double deficit = t * p_hat_[i] - static_cast<double>(state.count(i));
    if (deficit > best_deficit) {
      best_deficit = deficit;
      arm = i;
    }
  }
  return arm;
}

int AllocationPolicy::choose(const ExperimentState& state, Rng& rng) {
  if (state.k() != k_)
    throw std::invalid_argument("AllocationPolicy::choose: state arm count mismatch");
  switch (cfg_.kind) {
    case RuleKind::epsilon_greedy:
      return epsilon_greedy_arm(state, cfg_.epsilon, rng);
    case RuleKind::direct_tracking:
      return choose_tracking(state, rng);
    case RuleKind::thompson_sampling:
    case RuleKind::top_two_ts: {
      // Improper prior: an unsampled arm's draw is +/-infinity; we resolve it
      // by playing the lowest-index unsampled arm outright, which samples
      // every arm within the first k steps.
      const int unsampled = lowest_unsampled(state);
      if (unsampled >= 0) return unsampled;
      if (!snap_valid_ || state.t() - snap_t_ >= cfg_.batch) refresh_snapshot(state);
      if (cfg_.kind == RuleKind::thompson_sampling) return ts_draw(rng);
      return choose_top_two(state, rng);
    }
  }
  throw std::logic_error("AllocationPolicy::choose: unknown rule kind");
}

}  // namespace adex
