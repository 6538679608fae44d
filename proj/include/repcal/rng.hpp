#pragma once

#include <cstdint>
#include <random>

#include "repcal/types.hpp"

namespace repcal {

/// Seedable pseudo-random generator used throughout the simulator.
/// Backed by std::mt19937_64; all draw orders are fixed so that results
/// are bit-reproducible for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Circularly-symmetric complex Gaussian CN(0, sigma^2): real and
  /// imaginary parts independent N(0, sigma^2/2).
  Complex complex_gaussian(double sigma) {
    std::normal_distribution<double> n(0.0, sigma / std::sqrt(2.0));
    double re = n(engine_);
    double im = n(engine_);
    return {re, im};
  }

  /// Uniform phase on [-pi, pi).
  double uniform_phase() {
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    return u(engine_);
  }

  /// Uniform integer in [0, n).
  int uniform_index(int n) {
    std::uniform_int_distribution<int> u(0, n - 1);
    return u(engine_);
  }

  /// Unit-modulus complex number with uniform phase.
  Complex unit_phasor() { return std::polar(1.0, uniform_phase()); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Derives an independent stream seed from a master seed and up to two
/// indices. Adding grid points or trials does not perturb other streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i,
                                 std::uint64_t j = 0) {
  std::uint64_t s = detail::splitmix64(master);
  s = detail::splitmix64(s ^ detail::splitmix64(i + 0x51ed270b0a1b2c3dULL));
  s = detail::splitmix64(s ^ detail::splitmix64(j + 0xc2b2ae3d27d4eb4fULL));
  return s;
}

}  // namespace repcal
