#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace demigron {

/// SplitMix64 finalizer, used to scramble (seed, index) pairs into engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Mix a salt into a master seed so that independent consumers of one seed
/// (path generation, harness noise, ...) draw from unrelated streams.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) noexcept {
  return splitmix64(master ^ splitmix64(salt + 0x632be59bd9b4e019ULL));
}

struct StreamSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;

  constexpr std::uint64_t key() const noexcept {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(path_index * 0xd1b54a32d192ed03ULL + 1));
  }
};

/// Per-path random substream.
///
/// Every draw is a deterministic function of the StreamSeed: the engine is
/// std::mt19937_64 (output fully specified by the standard) and all
/// distributions are implemented here rather than through <random>'s
/// implementation-defined distribution classes.
class Substream {
 public:
  explicit Substream(StreamSeed seed) : engine_(seed.key()) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// +1 or -1 with equal probability.
  double rademacher() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via the Marsaglia polar method; the second variate of
  /// each accepted pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0, v = 0.0, s = 0.0;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

  /// Exponential with unit rate.
  double exponential() { return -std::log1p(-uniform()); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace demigron
