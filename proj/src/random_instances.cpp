#include "wsnest/random_instances.hpp"

#include <numbers>

#include "wsnest/rng.hpp"

namespace wsn {

NetworkModel random_network(std::uint64_t seed, std::size_t n) {
    Rng rng(derive_seed(seed, 0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    NetworkModel model;
    model.graph = random_connected_graph(n, GnpModel{0.5}, derive_seed(seed, 1));
    model.h = sample_channels(model.graph, ChannelSpec{}, derive_seed(seed, 2));
    model.sigma_v_sq.resize(n);
    for (double& s : model.sigma_v_sq) s = 0.5 + 1.5 * unit(rng);
    model.sigma_n_sq = 0.05 + 0.95 * unit(rng);
    model.theta = std::polar(1.0 + 9.0 * unit(rng), 2.0 * std::numbers::pi * unit(rng));
    model.noisy_self_link = unit(rng) < 0.5;
    return model;
}

GlobalModel random_compressed_model(std::uint64_t seed, std::size_t n, const GainVector& gains) {
    const NetworkModel model = random_network(seed, n);
    return build_global_model(model, select_retainers(model.graph, local_information_values(model, gains)));
}

GlobalModel random_dense_model(std::uint64_t seed, std::size_t m, std::size_t n) {
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    GlobalModel gm;
    const auto rows = static_cast<Eigen::Index>(m);
    const auto cols = static_cast<Eigen::Index>(n);
    gm.H.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) gm.H(r, c) = complex_gaussian(rng, 1.0);
    }
    gm.sigma.resize(rows);
    for (Eigen::Index r = 0; r < rows; ++r) gm.sigma[r] = 0.1 + 0.9 * unit(rng);
    gm.v.resize(cols);
    for (Eigen::Index c = 0; c < cols; ++c) gm.v[c] = 0.5 + 1.5 * unit(rng);
    for (std::size_t r = 0; r < m; ++r) gm.rows.emplace_back(r % n, r % n);
    return gm;
}

}  // namespace wsn
