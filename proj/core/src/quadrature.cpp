#include "adex/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace adex {

namespace {

// Classic Newton iteration on the (scaled) Hermite recurrence; initial guesses
// follow the standard asymptotic formulas for the largest roots.
GaussHermite compute(int n) {
  GaussHermite out;
  out.nodes.assign(n, 0.0);
  out.weights.assign(n, 0.0);
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(n, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * out.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * out.nodes[1];
    } else {
      z = 2.0 * z - out.nodes[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    out.nodes[i] = z;
    out.nodes[n - 1 - i] = -z;
    out.weights[i] = 2.0 / (pp * pp);
    out.weights[n - 1 - i] = out.weights[i];
  }
  if (n % 2 == 1) out.nodes[m - 1] = 0.0;
  return out;
}

GaussLegendre compute_legendre(int n) {
  GaussLegendre out;
  out.nodes.assign(n, 0.0);
  out.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    out.nodes[i] = -z;
    out.nodes[n - 1 - i] = z;
    out.weights[i] = out.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return out;
}

}  // namespace

const GaussHermite& gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: order must be positive");
  static std::map<int, GaussHermite> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute(n)).first;
  return it->second;
}

const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  static std::map<int, GaussLegendre> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_legendre(n)).first;
  return it->second;
}

}  // namespace adex
