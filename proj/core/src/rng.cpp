#include "adex/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace adex {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t stream_index) {
  return mix64(base_seed ^ mix64(stream_index));
}

double Rng::normal() {
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int n) {
  if (n <= 0) throw std::invalid_argument("Rng::uniform_int: n must be positive");
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t bound = std::numeric_limits<std::uint64_t>::max() / un * un;
  std::uint64_t x = next_u64();
  while (x >= bound) x = next_u64();
  return static_cast<int>(x % un);
}

long Rng::poisson(double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("Rng::poisson: mean must be positive");
  long k = 0;
  double s = -std::log(uniform_open());
  while (s <= mean) {
    ++k;
    s += -std::log(uniform_open());
  }
  return k;
}

}  // namespace adex
