#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wsnest/graph.hpp"

namespace wsn {

using cd = std::complex<double>;

/// (receiver, sender)
using Link = std::pair<NodeId, NodeId>;

struct ChannelSpec {
    enum class Kind { Unit, ComplexGaussian };
    Kind kind = Kind::ComplexGaussian;
    double sigma_h = 1.0;
    bool reciprocal = false;
};

/// Channel coefficients h_{k,i} for every directed edge pair. Self channels are
/// not stored; h_{i,i} = 1 by definition.
class ChannelMap {
public:
    ChannelMap() = default;
    explicit ChannelMap(std::map<Link, cd> table) : table_(std::move(table)) {}

    /// h_{receiver, sender}; throws OutOfRange for pairs that are not links.
    cd operator()(NodeId receiver, NodeId sender) const;
    const std::map<Link, cd>& table() const noexcept { return table_; }

private:
    std::map<Link, cd> table_;
};

ChannelMap sample_channels(const Graph& g, const ChannelSpec& spec, std::uint64_t seed);

struct NetworkModel {
    Graph graph;
    ChannelMap h;
    std::vector<double> sigma_v_sq;  // per node, > 0
    double sigma_n_sq = 0.1;         // >= 0
    cd theta{10.0, 0.0};
    bool noisy_self_link = false;    // does the self row carry transmission noise

    std::size_t size() const noexcept { return graph.size(); }
    /// Throws DimensionMismatch / InvalidArgument on a malformed model.
    void validate() const;
};

enum class GainDomain { FixedEnergy, Unimodular };

struct GainVector {
    Eigen::VectorXcd a;
    GainDomain domain = GainDomain::FixedEnergy;

    std::size_t size() const noexcept { return static_cast<std::size_t>(a.size()); }
    /// ||a||^2 = N (1e-9 relative) or |a_i| = 1 (1e-12).
    bool feasible() const;

    static GainVector all_ones(std::size_t n, GainDomain domain);
};

/// Per-node diagonal observation model over an ordered sender list.
struct LocalModel {
    NodeId owner = 0;
    std::vector<NodeId> senders;
    Eigen::VectorXcd h;             // h_{owner, s}
    Eigen::VectorXd v;              // sigma_v^2 of s
    Eigen::VectorXcd a;             // gain of s
    std::vector<bool> noisy;        // row carries transmission noise

    std::size_t rows() const noexcept { return senders.size(); }
};

/// Local model at node i over the given senders (each a neighbor of i or i itself).
LocalModel local_model(const NetworkModel& model, NodeId i, const GainVector& gains,
                       std::span<const NodeId> senders);

/// Local model at node i over every reception S_i plus its own observation.
LocalModel full_local_model(const NetworkModel& model, NodeId i, const GainVector& gains);

/// Diagonal of C_i: |h a|^2 sigma_v^2 + sigma_n^2 (the latter on noisy rows only).
Eigen::VectorXd local_noise_covariance(const LocalModel& m, double sigma_n_sq);

/// I_i = sum_s |h_s a_s|^2 / C_i[s]. Throws SingularCovariance on a zero entry.
double information_value(const LocalModel& m, const Eigen::VectorXd& c);

struct Observations {
    Eigen::VectorXcd z;              // z_i = theta + v_i
    std::map<Link, cd> link_noise;   // n_{k,i}, self pairs included
};

/// Draws z for nodes 0..N-1 in order, then link noise in (receiver, sender) order.
Observations sample_observations(const NetworkModel& model, std::uint64_t seed);

}  // namespace wsn
