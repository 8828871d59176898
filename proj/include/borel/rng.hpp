#pragma once

#include <cstdint>
#include <random>

namespace borel {

/// Deterministic random stream identified by (seed, stream index).
///
/// Output depends only on the pair, never on thread scheduling, so parallel
/// runs reproduce serial ones bit for bit.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix(seed, stream)) {}

  /// Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t seed_hash() const { return mix_seed_; }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }
  std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    mix_seed_ = splitmix(splitmix(seed) ^ splitmix(stream + 0x632be59bd9b4e019ULL));
    return mix_seed_;
  }

  std::uint64_t mix_seed_ = 0;
  std::mt19937_64 engine_;
};

}  // namespace borel
