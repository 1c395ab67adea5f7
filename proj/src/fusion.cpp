#include "wsnest/fusion.hpp"

#include <cmath>
#include <string>

#include "wsnest/error.hpp"

namespace wsn {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void check_gains(const GlobalModel& gm, const Eigen::VectorXcd& a) {
    if (a.size() != gm.N()) {
        throw Error(ErrorCode::DimensionMismatch, "gain vector length " + std::to_string(a.size()) +
                                                      " != N = " + std::to_string(gm.N()));
    }
}

}  // namespace

std::size_t SelectionPlan::retained_external() const {
    std::size_t count = 0;
    for (NodeId s = 0; s < retainer.size(); ++s) {
        if (retainer[s] != s) ++count;
    }
    return count;
}

std::vector<double> local_information_values(const NetworkModel& model, const GainVector& gains) {
    std::vector<double> info(model.size());
    for (NodeId i = 0; i < model.size(); ++i) {
        const LocalModel m = full_local_model(model, i, gains);
        info[i] = information_value(m, local_noise_covariance(m, model.sigma_n_sq));
    }
    return info;
}

SelectionPlan select_retainers(const Graph& g, std::span<const double> info) {
    const std::size_t n = g.size();
    if (info.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "one information value per node required");
    }
    for (double x : info) {
        if (!std::isfinite(x) || x < 0.0) {
            throw Error(ErrorCode::InvalidArgument, "information values must be finite and >= 0");
        }
    }

    SelectionPlan plan;
    plan.retainer.resize(n);
    plan.rows_at.assign(n, {});
    for (NodeId s = 0; s < n; ++s) {
        NodeId best = s;
        for (NodeId j : g.neighbors(s)) {
            if (info[j] > info[best] || (info[j] == info[best] && j < best)) best = j;
        }
        plan.retainer[s] = best;
        plan.rows_at[best].push_back(s);
    }
    // Senders were visited in ascending order, so each rows_at list is sorted.
    plan.discarded = 2 * g.edges().size() - plan.retained_external();
    return plan;
}

GlobalModel build_global_model(const NetworkModel& model, const SelectionPlan& plan) {
    model.validate();
    const std::size_t n = model.size();
    if (plan.retainer.size() != n || plan.rows_at.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "selection plan built for a different network");
    }

    GlobalModel gm;
    for (NodeId k = 0; k < n; ++k) {
        for (NodeId s : plan.rows_at[k]) {
            if (s >= n || plan.retainer[s] != k || (s != k && !model.graph.adjacent(k, s))) {
                throw Error(ErrorCode::DimensionMismatch, "inconsistent selection plan");
            }
            gm.rows.emplace_back(k, s);
        }
    }
    if (gm.rows.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "selection plan does not retain every sender once");
    }

    const auto m = idx(gm.rows.size());
    gm.H = Eigen::MatrixXcd::Zero(m, idx(n));
    gm.sigma.resize(m);
    gm.v.resize(idx(n));
    for (std::size_t i = 0; i < n; ++i) gm.v[idx(i)] = model.sigma_v_sq[i];
    for (Eigen::Index r = 0; r < m; ++r) {
        const auto [k, s] = gm.rows[static_cast<std::size_t>(r)];
        gm.H(r, idx(s)) = model.h(k, s);
        const bool noisy = (k != s) || model.noisy_self_link;
        gm.sigma[r] = noisy ? model.sigma_n_sq : 0.0;
    }
    return gm;
}

void check_compressed(const GlobalModel& gm) {
    if (gm.sigma.size() != gm.M() || gm.v.size() != gm.N() ||
        gm.rows.size() != static_cast<std::size_t>(gm.M())) {
        throw Error(ErrorCode::DimensionMismatch, "global model containers disagree in size");
    }
    std::vector<bool> used(static_cast<std::size_t>(gm.N()), false);
    for (Eigen::Index r = 0; r < gm.M(); ++r) {
        const NodeId s = gm.rows[static_cast<std::size_t>(r)].second;
        if (s >= used.size() || used[s]) {
            throw Error(ErrorCode::DimensionMismatch, "sender occupies more than one row");
        }
        used[s] = true;
        for (Eigen::Index c = 0; c < gm.N(); ++c) {
            if (c != idx(s) && gm.H(r, c) != cd{}) {
                throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(r) +
                                                              " has an entry off its sender column");
            }
        }
    }
}

Eigen::VectorXd combined_covariance(const GlobalModel& gm, const Eigen::VectorXcd& a) {
    check_compressed(gm);
    check_gains(gm, a);
    Eigen::VectorXd c(gm.M());
    for (Eigen::Index r = 0; r < gm.M(); ++r) {
        const auto s = idx(gm.rows[static_cast<std::size_t>(r)].second);
        c[r] = std::norm(gm.H(r, s) * a[s]) * gm.v[s] + gm.sigma[r];
        if (!(c[r] > 0.0)) {
            throw Error(ErrorCode::SingularCovariance, "zero combined covariance on row " +
                                                           std::to_string(r));
        }
    }
    return c;
}

InformationSplit decompose_information(const GlobalModel& gm, const Eigen::VectorXcd& a,
                                       const Eigen::VectorXcd* y) {
    const Eigen::VectorXd c = combined_covariance(gm, a);
    if (y != nullptr && y->size() != gm.M()) {
        throw Error(ErrorCode::DimensionMismatch, "received vector length differs from M");
    }
    InformationSplit split;
    split.I = Eigen::VectorXd::Zero(gm.N());
    if (y != nullptr) split.P = Eigen::VectorXcd::Zero(gm.N());
    for (Eigen::Index r = 0; r < gm.M(); ++r) {
        const auto [k, s] = gm.rows[static_cast<std::size_t>(r)];
        const cd ha = gm.H(r, idx(s)) * a[idx(s)];
        split.I[idx(k)] += std::norm(ha) / c[r];
        if (y != nullptr) (*split.P)[idx(k)] += std::conj(ha) * (*y)[r] / c[r];
    }
    return split;
}

double fisher_information(const GlobalModel& gm, const Eigen::VectorXcd& a) {
    return decompose_information(gm, a).I.sum();
}

cd ml_estimate(const Eigen::VectorXcd& y, const GlobalModel& gm, const Eigen::VectorXcd& a) {
    const InformationSplit split = decompose_information(gm, a, &y);
    const double info = split.I.sum();
    if (!(info > 0.0)) throw Error(ErrorCode::ZeroInformation, "a^H H^H C^-1 H a is zero");
    return split.P->sum() / info;
}

double ml_variance(const GlobalModel& gm, const Eigen::VectorXcd& a) {
    const double info = fisher_information(gm, a);
    if (!(info > 0.0)) throw Error(ErrorCode::ZeroInformation, "a^H H^H C^-1 H a is zero");
    return 1.0 / info;
}

Eigen::VectorXcd received_vector(const GlobalModel& gm, const Eigen::VectorXcd& a,
                                 const Observations& obs) {
    check_gains(gm, a);
    if (obs.z.size() != gm.N()) {
        throw Error(ErrorCode::DimensionMismatch, "observation vector length differs from N");
    }
    Eigen::VectorXcd y(gm.M());
    for (Eigen::Index r = 0; r < gm.M(); ++r) {
        const Link link = gm.rows[static_cast<std::size_t>(r)];
        const auto s = idx(link.second);
        y[r] = gm.H(r, s) * a[s] * obs.z[s];
        if (gm.sigma[r] > 0.0) y[r] += obs.link_noise.at(link);
    }
    return y;
}

}  // namespace wsn
