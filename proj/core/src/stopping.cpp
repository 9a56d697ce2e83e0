#include "adex/stopping.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace adex {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

StoppingRule make_rule(StopKind kind, std::int64_t n) {
  if (n < 2) throw std::invalid_argument("StoppingRule: population size must be >= 2");
  return StoppingRule{kind, n};
}
}  // namespace

StoppingRule StoppingRule::exact(std::int64_t n) { return make_rule(StopKind::exact_threshold, n); }
StoppingRule StoppingRule::heuristic(std::int64_t n) {
  return make_rule(StopKind::heuristic_quantile, n);
}

double gamma_threshold(std::int64_t t, std::int64_t n, int k) {
  if (t == 0) return kInf;
  const double a = std::log(static_cast<double>(n)) + std::log(static_cast<double>(k - 1));
  return a + 6.0 * std::log(a / 2.0 + 2.0) +
         6.0 * std::log(std::log(static_cast<double>(t) / 2.0) + 1.0) + 14.0;
}

double h_inverse(double y) {
  if (!(y >= 1.0)) throw std::invalid_argument("h_inverse: requires y >= 1");
  if (y == 1.0) return 1.0;
  auto h = [](double u) { return u - std::log(u); };
  // Bracket guaranteed by y + ln(y) <= h^{-1}(y) <= y + ln(2y).
  double lo = 1.0;
  double hi = y + std::log(2.0 * y) + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double c_exp(double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("c_exp: requires x >= 0");
  static const double kBreak = 1.0 / std::log(1.5) - std::log(1.0 / std::log(1.5));
  const double y = (h_inverse(x + 1.0) + std::log(std::numbers::pi * std::numbers::pi / 3.0)) / 2.0;
  double ht;
  if (y >= kBreak) {
    const double u = h_inverse(y);
    ht = std::exp(1.0 / u) * u;
  } else {
    ht = 1.5 * (y - std::log(std::log(1.5)));
  }
  return 2.0 * ht;
}

double kaufmann_threshold(std::int64_t t, double delta, int k) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("kaufmann_threshold: delta must lie in (0,1)");
  if (t < 1) throw std::invalid_argument("kaufmann_threshold: requires t >= 1");
  return 2.0 * c_exp(std::log(static_cast<double>(k - 1) / delta) / 2.0) +
         6.0 * std::log(std::log(static_cast<double>(t) / 2.0) + 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

double log_normal_cdf(double x) {
  if (x > -8.0) return std::log(normal_cdf(x));
  // Phi(x) = phi(x)/(-x) * (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8 - ...)
  const double x2 = x * x;
  const double series =
      1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2) + 105.0 / (x2 * x2 * x2 * x2);
  return -0.5 * x2 - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(-x) + std::log(series);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must lie in (0,1)");

  // Acklam's rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Newton step against the exact CDF.
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  if (pdf > 0.0) x -= (normal_cdf(x) - p) / pdf;
  return x;
}

bool should_stop(const StoppingRule& rule, const ExperimentState& state) {
  if (state.t() == 0) return false;
  switch (rule.kind) {
    case StopKind::never:
      return false;
    case StopKind::exact_threshold: {
      const double gamma = gamma_threshold(state.t(), rule.n, state.k());
      return stopping_statistic(state).value >= gamma;
    }
    case StopKind::heuristic_quantile: {
      if (!state.family().is_gaussian())
        throw std::logic_error("should_stop: heuristic quantile rule is Gaussian-only");
      for (int i = 0; i < state.k(); ++i)
        if (state.count(i) == 0) return false;
      const double threshold = normal_quantile(
          1.0 - 1.0 / (static_cast<double>(rule.n) * static_cast<double>(state.k() - 1)));
      const int leader = state.empirical_best();
      double min_z = kInf;
      for (int j = 0; j < state.k(); ++j) {
        if (j == leader) continue;
        min_z = std::min(min_z, state.z_statistic(leader, j));
      }
      return min_z >= threshold;
    }
  }
  return false;
}

}  // namespace adex
