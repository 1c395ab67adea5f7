#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wsnest/network_model.hpp"

namespace wsn {

/// Which node keeps each sender's broadcast. Every sender is retained exactly
/// once, by the node of highest pre-selection information among S_i and i
/// itself; every other reception of that broadcast is discarded.
struct SelectionPlan {
    std::vector<NodeId> retainer;              // retainer[s]
    std::vector<std::vector<NodeId>> rows_at;  // rows_at[k]: senders kept at k, ascending
    std::size_t discarded = 0;                 // r = 2|E| - retained external links

    std::size_t retained_external() const;
    std::size_t rows() const { return retainer.size(); }
};

/// Pre-selection information value I_i of every node over its full neighborhood.
std::vector<double> local_information_values(const NetworkModel& model, const GainVector& gains);

/// Argmax over S_i and i of `info`, ties to the smallest id.
SelectionPlan select_retainers(const Graph& g, std::span<const double> info);

/// Stacked compressed model y = H a theta + H D v + G n.
struct GlobalModel {
    Eigen::MatrixXcd H;         // M x N
    Eigen::VectorXd sigma;      // diagonal of Sigma (transmission noise per row)
    Eigen::VectorXd v;          // diagonal of V (observation noise per node)
    std::vector<Link> rows;     // row -> (receiver, sender)

    Eigen::Index M() const { return H.rows(); }
    Eigen::Index N() const { return H.cols(); }
};

GlobalModel build_global_model(const NetworkModel& model, const SelectionPlan& plan);

/// Throws DimensionMismatch unless every row has a single nonzero at its
/// sender column and no sender occupies two rows (C is then diagonal).
void check_compressed(const GlobalModel& gm);

/// Diagonal of C = H D V D^H H^H + Sigma for a compressed model.
Eigen::VectorXd combined_covariance(const GlobalModel& gm, const Eigen::VectorXcd& a);

/// a^H H^H C^-1 H a.
double fisher_information(const GlobalModel& gm, const Eigen::VectorXcd& a);

cd ml_estimate(const Eigen::VectorXcd& y, const GlobalModel& gm, const Eigen::VectorXcd& a);
double ml_variance(const GlobalModel& gm, const Eigen::VectorXcd& a);

struct InformationSplit {
    Eigen::VectorXd I;                     // I_i(0)
    std::optional<Eigen::VectorXcd> P;    // P_i(0), when y is given
};

/// Per-receiver split of the global information (and of a^H H^H C^-1 y).
InformationSplit decompose_information(const GlobalModel& gm, const Eigen::VectorXcd& a,
                                       const Eigen::VectorXcd* y = nullptr);

/// Received compressed vector for one realization of observations and link noise.
Eigen::VectorXcd received_vector(const GlobalModel& gm, const Eigen::VectorXcd& a,
                                 const Observations& obs);

}  // namespace wsn
