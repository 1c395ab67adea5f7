#include "wsnest/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsnest/error.hpp"
#include "wsnest/rng.hpp"

namespace wsn {

cd ChannelMap::operator()(NodeId receiver, NodeId sender) const {
    if (receiver == sender) return {1.0, 0.0};
    auto it = table_.find({receiver, sender});
    if (it == table_.end()) {
        throw Error(ErrorCode::OutOfRange, "no channel " + std::to_string(sender) + " -> " +
                                               std::to_string(receiver));
    }
    return it->second;
}

ChannelMap sample_channels(const Graph& g, const ChannelSpec& spec, std::uint64_t seed) {
    if (spec.kind == ChannelSpec::Kind::ComplexGaussian && !(spec.sigma_h > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "sigma_h must be positive");
    }
    Rng rng(seed);
    const double var = spec.sigma_h * spec.sigma_h;
    auto draw = [&]() -> cd {
        if (spec.kind == ChannelSpec::Kind::Unit) return {1.0, 0.0};
        return complex_gaussian(rng, var);
    };

    std::map<Link, cd> table;
    for (const Edge& e : g.edges()) {
        const cd forward = draw();  // h_{v,u}
        table[{e.v, e.u}] = forward;
        table[{e.u, e.v}] = spec.reciprocal ? forward : draw();
    }
    return ChannelMap(std::move(table));
}

void NetworkModel::validate() const {
    const std::size_t n = graph.size();
    if (sigma_v_sq.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "sigma_v_sq has " +
                                                      std::to_string(sigma_v_sq.size()) +
                                                      " entries for " + std::to_string(n) +
                                                      " nodes");
    }
    for (double s : sigma_v_sq) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw Error(ErrorCode::InvalidArgument, "observation noise variances must be > 0");
        }
    }
    if (!(sigma_n_sq >= 0.0) || !std::isfinite(sigma_n_sq)) {
        throw Error(ErrorCode::InvalidArgument, "sigma_n_sq must be >= 0");
    }
    if (h.table().size() != 2 * graph.edges().size()) {
        throw Error(ErrorCode::DimensionMismatch, "channel table does not cover every link");
    }
    for (const auto& [link, value] : h.table()) {
        if (link.first == link.second || !graph.adjacent(link.first, link.second)) {
            throw Error(ErrorCode::DimensionMismatch, "channel defined on a non-link");
        }
    }
}

bool GainVector::feasible() const {
    const double n = static_cast<double>(a.size());
    switch (domain) {
        case GainDomain::FixedEnergy:
            return std::abs(a.squaredNorm() - n) <= 1e-9 * std::max(n, 1.0);
        case GainDomain::Unimodular:
            for (Eigen::Index i = 0; i < a.size(); ++i) {
                if (std::abs(std::abs(a[i]) - 1.0) > 1e-12) return false;
            }
            return true;
    }
    return false;
}

GainVector GainVector::all_ones(std::size_t n, GainDomain domain) {
    return {Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(n)), domain};
}

LocalModel local_model(const NetworkModel& model, NodeId i, const GainVector& gains,
                       std::span<const NodeId> senders) {
    if (gains.size() != model.size()) {
        throw Error(ErrorCode::DimensionMismatch, "gain vector length differs from node count");
    }
    LocalModel m;
    m.owner = i;
    m.senders.assign(senders.begin(), senders.end());
    const auto rows = static_cast<Eigen::Index>(senders.size());
    m.h.resize(rows);
    m.v.resize(rows);
    m.a.resize(rows);
    m.noisy.resize(senders.size());
    for (Eigen::Index r = 0; r < rows; ++r) {
        const NodeId s = senders[static_cast<std::size_t>(r)];
        m.h[r] = model.h(i, s);
        m.v[r] = model.sigma_v_sq.at(s);
        m.a[r] = gains.a[static_cast<Eigen::Index>(s)];
        m.noisy[static_cast<std::size_t>(r)] = (s != i) || model.noisy_self_link;
    }
    return m;
}

LocalModel full_local_model(const NetworkModel& model, NodeId i, const GainVector& gains) {
    std::vector<NodeId> senders(model.graph.neighbors(i).begin(), model.graph.neighbors(i).end());
    senders.insert(std::lower_bound(senders.begin(), senders.end(), i), i);
    return local_model(model, i, gains, senders);
}

Eigen::VectorXd local_noise_covariance(const LocalModel& m, double sigma_n_sq) {
    Eigen::VectorXd c(m.h.size());
    for (Eigen::Index r = 0; r < c.size(); ++r) {
        c[r] = std::norm(m.h[r] * m.a[r]) * m.v[r] +
               (m.noisy[static_cast<std::size_t>(r)] ? sigma_n_sq : 0.0);
        if (!(c[r] > 0.0)) {
            throw Error(ErrorCode::SingularCovariance,
                        "zero noise covariance on row " + std::to_string(r) + " at node " +
                            std::to_string(m.owner));
        }
    }
    return c;
}

double information_value(const LocalModel& m, const Eigen::VectorXd& c) {
    if (c.size() != m.h.size()) {
        throw Error(ErrorCode::DimensionMismatch, "covariance and local model sizes differ");
    }
    double info = 0.0;
    for (Eigen::Index r = 0; r < c.size(); ++r) {
        if (!(c[r] > 0.0)) throw Error(ErrorCode::SingularCovariance, "non-positive covariance");
        info += std::norm(m.h[r] * m.a[r]) / c[r];
    }
    return info;
}

Observations sample_observations(const NetworkModel& model, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = model.size();
    Observations obs;
    obs.z.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        obs.z[static_cast<Eigen::Index>(i)] = model.theta + complex_gaussian(rng, model.sigma_v_sq[i]);
    }
    for (NodeId k = 0; k < n; ++k) {
        std::vector<NodeId> senders(model.graph.neighbors(k).begin(), model.graph.neighbors(k).end());
        senders.insert(std::lower_bound(senders.begin(), senders.end(), k), k);
        for (NodeId s : senders) {
            obs.link_noise[{k, s}] = complex_gaussian(rng, model.sigma_n_sq);
        }
    }
    return obs;
}

}  // namespace wsn
