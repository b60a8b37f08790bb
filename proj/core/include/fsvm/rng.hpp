#pragma once

#include <cstdint>
#include <random>
#include <string>

// Deterministic, portable random layer. The engine is std::mt19937_64 (its
// output sequence is fixed by the standard); distributions are implemented
// here rather than taken from <random> because the standard leaves those
// implementation-defined. Streams are derived from a (seed, role) pair so
// independent datasets (train/valid/test) can share one user-facing seed.
//
// Generator identity string, recorded in dataset metadata:
//   mt19937_64/splitmix64-role/u53/box-muller v1

namespace fsvm {

/// Identity tag for reproducibility metadata.
const char* rng_identity();

class Rng {
 public:
  /// Stream for (seed, role): the engine seed is splitmix64 applied to the
  /// user seed XOR FNV-1a(role).
  Rng(std::uint64_t seed, const std::string& role);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform();

  /// Uniform integer in [lo, hi] via 128-bit multiply-shift.
  int uniform_int(int lo, int hi);

  /// Standard normal via Box-Muller; both values of each pair are used.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fsvm
