#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace wsn {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Child seed for stream `stream` of `seed`. Trials, attempts and sampling
/// stages all derive their engines through this single counter scheme:
///   derive_seed(s, k) = splitmix64(s + (k + 1) * 0x9E3779B97F4A7C15)
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Stream tags used under a per-trial seed.
namespace stream {
inline constexpr std::uint64_t graph = 1;
inline constexpr std::uint64_t channels = 2;
inline constexpr std::uint64_t noise = 3;
inline constexpr std::uint64_t gains = 4;
}  // namespace stream

/// Circularly-symmetric complex Gaussian: real and imaginary parts i.i.d. N(0, variance/2).
std::complex<double> complex_gaussian(Rng& rng, double variance);

}  // namespace wsn
