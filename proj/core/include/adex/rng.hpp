#pragma once

#include <cstdint>
#include <random>

namespace adex {

// SplitMix64 finalizer; used to spread seeds and to derive per-trial streams.
std::uint64_t mix64(std::uint64_t x);

// Counter-based stream derivation: combines a base seed with a stream index
// so that trials can run in parallel while staying reproducible.
std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t stream_index);

// Explicit, caller-owned random source. All library sampling goes through
// this class; the draw sequences below are part of the determinism contract
// (same seed and call sequence => bitwise identical results).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // Standard normal via Box-Muller; consumes exactly two words per draw.
  double normal();

  // Uniform integer in {0, ..., n-1}, rejection sampled (no modulo bias).
  int uniform_int(int n);

  bool bernoulli(double p) { return uniform() < p; }

  // Poisson count by exponential inter-arrival counting; robust for any mean.
  long poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

}  // namespace adex
