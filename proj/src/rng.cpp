#include "wsnest/rng.hpp"

#include <cmath>

namespace wsn {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

std::complex<double> complex_gaussian(Rng& rng, double variance) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = std::sqrt(variance / 2.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return {scale * re, scale * im};
}

}  // namespace wsn
