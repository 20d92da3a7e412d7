#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace permwalk {

/// Seedable deterministic random stream.
///
/// The generator is the standard-specified mt19937_64, so the raw 64-bit
/// stream reproduces bit-for-bit across platforms and standard libraries.
/// All derived draws (bounded integers, doubles, normals) are implemented
/// here rather than with std distributions, whose algorithms are
/// implementation-defined:
///   - uniform_index: Lemire's multiply-and-reject bounded sampler
///   - uniform:       53-bit mantissa scaling, values in [0, 1)
///   - normal:        Box-Muller on two uniform draws, spare cached
///
/// A stream is single-owner; parallel code must use independent streams,
/// obtained from distinct seeds or from for_chain().
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  /// Derived seed for chain `chain` of a parallel run; splitmix64-mixes the
  /// pair so chain seeds do not collide with nearby user seeds.
  static std::uint64_t chain_seed(std::uint64_t seed, std::uint64_t chain)
  {
    return mix(seed + 0x9e3779b97f4a7c15ull * (chain + 1));
  }

  static RandomStream for_chain(std::uint64_t seed, std::uint64_t chain)
  {
    return RandomStream(chain_seed(seed, chain));
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform integer in [0, bound); bound must be nonzero.
  std::uint64_t uniform_index(std::uint64_t bound)
  {
    // Lemire 2019: multiply into a 128-bit window, reject the biased low part.
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0ull - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform()
  {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal deviate.
  double normal()
  {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

private:
  static std::uint64_t mix(std::uint64_t z)
  {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace permwalk
