#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace jtprec {

using Rng = std::mt19937_64;

/// One step of the splitmix64 mixer; used to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream));
}

/// Circularly symmetric CN(0, 1): real and imaginary parts N(0, 1/2).
inline std::complex<double> complex_normal(Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace jtprec
