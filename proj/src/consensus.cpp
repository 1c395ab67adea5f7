#include "wsnest/consensus.hpp"

namespace wsn {

namespace {

std::vector<std::optional<cd>> estimates(const std::vector<double>& I, const std::vector<cd>& P) {
    std::vector<std::optional<cd>> theta(I.size());
    for (std::size_t i = 0; i < I.size(); ++i) {
        if (std::abs(I[i]) >= kInformationGuard) theta[i] = P[i] / I[i];
    }
    return theta;
}

}  // namespace

MleTrace decentralized_mle(const Graph& g, const AdmmConfig& cfg, std::span<const double> I0,
                           std::span<const cd> P0) {
    cfg.validate();
    const std::size_t n = g.size();
    if (I0.size() != n || P0.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "one (I, P) pair per node required");
    }
    const double total_info = mean_of(I0) * static_cast<double>(n);
    if (!(total_info > 0.0)) throw Error(ErrorCode::ZeroInformation, "sum of I_i(0) is zero");

    const double info_mean = mean_of(I0);
    const cd state_mean = mean_of(P0);

    MleTrace trace;
    trace.reference = state_mean / info_mean;
    auto info = ConsensusState<double>::zeros(n);
    auto state = ConsensusState<cd>::zeros(n);
    trace.I.push_back(info.y);
    trace.P.push_back(state.y);
    trace.theta.push_back(estimates(info.y, state.y));

    double residual = 0.0;
    while (info.iter < cfg.max_iter) {
        info = admm_step<double>(g, cfg, info, I0);
        state = admm_step<cd>(g, cfg, state, P0);
        trace.I.push_back(info.y);
        trace.P.push_back(state.y);
        trace.theta.push_back(estimates(info.y, state.y));
        residual = std::max(disagreement<double>(info.y, info_mean),
                            disagreement<cd>(state.y, state_mean));
        if (residual <= cfg.tol) {
            trace.iterations = info.iter;
            return trace;
        }
    }
    throw NotConvergedError("decentralized MLE after " + std::to_string(cfg.max_iter) + " rounds",
                            residual);
}

}  // namespace wsn
