#pragma once

#include <cstdint>

#include "wsnest/fusion.hpp"
#include "wsnest/network_model.hpp"

namespace wsn {

/// Small random network: G(n, 0.5) topology, CN(0,1) channels,
/// sigma_v^2 ~ U[0.5, 2], sigma_n^2 ~ U[0.05, 1], random theta and self-link mode.
NetworkModel random_network(std::uint64_t seed, std::size_t n);

/// Compressed model of random_network(seed, n) with selection made under `gains`.
GlobalModel random_compressed_model(std::uint64_t seed, std::size_t n, const GainVector& gains);

/// Dense M x N model with CN(0,1) entries, Sigma ~ U[0.1, 1], V ~ U[0.5, 2].
/// Rows are correlated, so only the dense (optimizer) routes apply to it.
GlobalModel random_dense_model(std::uint64_t seed, std::size_t m, std::size_t n);

}  // namespace wsn
