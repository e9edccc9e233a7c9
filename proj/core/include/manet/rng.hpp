#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace manet {

/// Seeded pseudo-random stream. Every consumer owns its own instance; nothing
/// global is touched, so two streams derived from different labels never
/// perturb each other.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Stream for a named consumer, derived from the master seed and a fixed label.
  static Rng derive(std::uint64_t master_seed, std::string_view label);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Log-uniform on [lo, hi], lo > 0.
  double log_uniform(double lo, double hi);
  bool bernoulli(double p);
  /// Exponential with the given mean (unit-mean Rayleigh power fading by default).
  double exponential(double mean = 1.0);
  std::uint64_t poisson(double mean);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// 64-bit FNV-1a, used for seed derivation and config hashing.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace manet
