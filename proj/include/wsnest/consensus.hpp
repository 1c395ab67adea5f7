#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wsnest/error.hpp"
#include "wsnest/graph.hpp"

namespace wsn {

struct AdmmConfig {
    double rho = 0.5;
    std::size_t max_iter = 10000;
    double tol = 1e-10;  // on max_i |y_i - mean(x)|

    void validate() const {
        if (!(rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "rho must be positive");
        if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
    }
};

/// Local copies y_i and multipliers lambda_i for one consensus stream.
template <typename T>
struct ConsensusState {
    std::vector<T> y;
    std::vector<T> lambda;
    std::size_t iter = 0;

    static ConsensusState zeros(std::size_t n) { return {std::vector<T>(n), std::vector<T>(n), 0}; }
};

/// One synchronous ADMM round. The y-update reads the neighbors' previous
/// iterates, the lambda-update the new ones; d_i counts neighbors excluding i.
template <typename T>
ConsensusState<T> admm_step(const Graph& g, const AdmmConfig& cfg, const ConsensusState<T>& state,
                            std::span<const T> x) {
    const std::size_t n = g.size();
    if (state.y.size() != n || state.lambda.size() != n || x.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "consensus state does not match the graph");
    }
    const double rho = cfg.rho;
    ConsensusState<T> next;
    next.y.resize(n);
    next.lambda.resize(n);
    next.iter = state.iter + 1;

    for (NodeId i = 0; i < n; ++i) {
        const auto nbrs = g.neighbors(i);
        const double d = static_cast<double>(nbrs.size());
        T sum{};
        for (NodeId j : nbrs) sum += state.y[j];
        next.y[i] = (rho * d * state.y[i] + rho * sum - state.lambda[i] + x[i]) / (1.0 + 2.0 * rho * d);
    }
    for (NodeId i = 0; i < n; ++i) {
        const auto nbrs = g.neighbors(i);
        const double d = static_cast<double>(nbrs.size());
        T sum{};
        for (NodeId j : nbrs) sum += next.y[j];
        next.lambda[i] = state.lambda[i] + rho * (d * next.y[i] - sum);
    }
    return next;
}

template <typename T>
T mean_of(std::span<const T> x) {
    T total{};
    for (const T& v : x) total += v;
    return total / static_cast<double>(x.size());
}

template <typename T>
double disagreement(std::span<const T> y, const T& target) {
    double worst = 0.0;
    for (const T& v : y) worst = std::max(worst, static_cast<double>(std::abs(v - target)));
    return worst;
}

template <typename T>
struct ConsensusRun {
    std::vector<std::vector<T>> trajectory;  // trajectory[k] = y^k, y^0 = 0
    T mean{};
    std::size_t iterations = 0;
    double disagreement = 0.0;
};

/// Iterates from the zero state until max_i |y_i^k - mean(x)| <= tol.
/// Throws NotConvergedError (carrying the final disagreement) after max_iter rounds.
template <typename T>
ConsensusRun<T> run_average_consensus(const Graph& g, const AdmmConfig& cfg, std::span<const T> x) {
    cfg.validate();
    if (x.size() != g.size()) {
        throw Error(ErrorCode::DimensionMismatch, "one initial value per node required");
    }
    ConsensusRun<T> run;
    run.mean = mean_of(x);
    auto state = ConsensusState<T>::zeros(g.size());
    run.trajectory.push_back(state.y);
    run.disagreement = disagreement<T>(state.y, run.mean);
    while (state.iter < cfg.max_iter) {
        state = admm_step<T>(g, cfg, state, x);
        run.trajectory.push_back(state.y);
        run.disagreement = disagreement<T>(state.y, run.mean);
        if (run.disagreement <= cfg.tol) {
            run.iterations = state.iter;
            return run;
        }
    }
    throw NotConvergedError("average consensus after " + std::to_string(cfg.max_iter) + " rounds",
                            run.disagreement);
}

using cd = std::complex<double>;

/// Per-node estimate trajectories of the two-stream (I, P) consensus.
struct MleTrace {
    std::vector<std::vector<double>> I;                   // I[k][i]
    std::vector<std::vector<cd>> P;                       // P[k][i]
    std::vector<std::vector<std::optional<cd>>> theta;    // theta[k][i]; empty while |I| < guard
    cd reference{};                                       // sum P0 / sum I0
    std::size_t iterations = 0;
};

inline constexpr double kInformationGuard = 1e-9;

/// Runs consensus on I0 (real) and P0 (complex) with a shared round counter and
/// stops once both streams are within tol of their averages.
MleTrace decentralized_mle(const Graph& g, const AdmmConfig& cfg, std::span<const double> I0,
                           std::span<const cd> P0);

}  // namespace wsn
