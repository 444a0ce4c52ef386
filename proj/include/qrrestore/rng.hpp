#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qrrestore {

/// SplitMix64 finalizer; used to derive independent substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Mixes a master seed with a path of indices (cell, realization, ...) into
/// a substream seed. Distinct paths give decorrelated streams.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Portable noise source: mt19937_64 (whose output sequence is fixed by the
/// standard) with hand-written distribution transforms, so a seed yields the
/// same samples on every conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller; the second variate is cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qrrestore
