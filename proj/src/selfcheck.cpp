#include "wsnest/selfcheck.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wsnest/experiment.hpp"
#include "wsnest/fusion.hpp"
#include "wsnest/random_instances.hpp"
#include "wsnest/rng.hpp"

namespace wsn {

namespace {

double rel_gap(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

Eigen::VectorXcd random_vector(Rng& rng, Eigen::Index size) {
    Eigen::VectorXcd v(size);
    for (Eigen::Index i = 0; i < size; ++i) v[i] = complex_gaussian(rng, 1.0);
    return v;
}

/// Runs `check(case_index, rng)` for every case; a non-empty return is a failure message.
PropertyResult run_property(const std::string& name, std::uint64_t seed, std::size_t cases,
                            const std::function<std::string(std::size_t, Rng&)>& check) {
    PropertyResult result{name, cases, 0, {}};
    for (std::size_t c = 0; c < cases; ++c) {
        Rng rng(derive_seed(seed, c));
        std::string failure;
        try {
            failure = check(c, rng);
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        if (!failure.empty()) {
            if (result.failures++ == 0) result.first_failure = "case " + std::to_string(c) + ": " + failure;
        }
    }
    return result;
}

std::size_t small_n(Rng& rng, std::size_t lo = 1) {
    return std::uniform_int_distribution<std::size_t>(lo, 8)(rng);
}

std::string check_topology(std::size_t, Rng& rng) {
    const std::size_t n = small_n(rng);
    const GraphModel model = (rng() & 1) ? GraphModel{GnpModel{0.5}} : GraphModel{GeometricModel{0.6}};
    const std::uint64_t seed = rng();
    const Graph g = random_connected_graph(n, model, seed);
    std::vector<std::vector<NodeId>> adjacency(n);
    for (NodeId i = 0; i < n; ++i) adjacency[i].assign(g.neighbors(i).begin(), g.neighbors(i).end());
    if (bfs_order(n, adjacency, 0).size() != n) return "BFS from node 0 misses nodes";
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j : g.neighbors(i)) {
            if (j == i) return "self loop stored";
            if (!g.adjacent(j, i)) return "asymmetric adjacency";
        }
    }
    if (!(random_connected_graph(n, model, seed) == g)) return "generation not deterministic";
    return {};
}

std::string check_phase_invariance(std::size_t, Rng& rng) {
    const std::size_t n = small_n(rng);
    NetworkModel model = random_network(rng(), n);
    const GainVector gains = random_gains(n, GainDomain::FixedEnergy, rng());
    const NodeId i = std::uniform_int_distribution<NodeId>(0, n - 1)(rng);
    const double phi = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
    GainVector rotated = gains;
    rotated.a *= std::polar(1.0, phi);

    const LocalModel m = full_local_model(model, i, gains);
    const LocalModel mr = full_local_model(model, i, rotated);
    const double base = information_value(m, local_noise_covariance(m, model.sigma_n_sq));
    const double turned = information_value(mr, local_noise_covariance(mr, model.sigma_n_sq));
    if (rel_gap(base, turned) > 1e-12) return "I_i changes under a global phase rotation";

    bool has_noisy_row = false;
    for (std::size_t r = 0; r < m.rows(); ++r) has_noisy_row |= m.noisy[r];
    const double doubled = information_value(m, local_noise_covariance(m, 2.0 * model.sigma_n_sq));
    if (has_noisy_row && !(doubled < base)) return "doubling sigma_n^2 did not lower I_i";
    return {};
}

std::string check_partition(std::size_t, Rng& rng) {
    const std::size_t n = small_n(rng);
    const GainVector gains = random_gains(n, GainDomain::FixedEnergy, rng());
    const GlobalModel gm = random_compressed_model(rng(), n, gains);
    const Eigen::VectorXd split = decompose_information(gm, gains.a).I;

    double direct = 0.0;
    for (Eigen::Index r = 0; r < gm.M(); ++r) {
        const cd ha = (gm.H.row(r) * gains.a)(0, 0);
        double power = 0.0;
        for (Eigen::Index s = 0; s < gm.N(); ++s) power += std::norm(gm.H(r, s) * gains.a[s]) * gm.v[s];
        direct += std::norm(ha) / (power + gm.sigma[r]);
    }
    if (rel_gap(split.sum(), direct) > 1e-12) return "sum of I_i(0) differs from global information";
    if (rel_gap(ml_variance(gm, gains.a), 1.0 / split.sum()) > 1e-12) return "variance != 1 / sum I_i(0)";
    if (rel_gap(dense_information(gm, gains.a), direct) > 1e-10) return "dense and diagonal routes differ";
    return {};
}

std::string check_consensus_limit(std::size_t, Rng& rng, const SelfCheckHooks& hooks) {
    const std::size_t n = small_n(rng);
    const Graph g = random_connected_graph(n, GnpModel{0.5}, rng());
    AdmmConfig cfg;
    cfg.rho = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
    std::vector<cd> x(n);
    for (cd& v : x) v = complex_gaussian(rng, 4.0);
    const cd mean = mean_of<cd>(x);

    auto state = ConsensusState<cd>::zeros(n);
    for (std::size_t k = 0; k < 10000; ++k) {
        state = hooks.admm_step(g, cfg, state, x);
        if (disagreement<cd>(state.y, mean) <= 1e-8) return {};
    }
    std::ostringstream msg;
    msg << "no consensus on the mean within 1e4 rounds (disagreement "
        << disagreement<cd>(state.y, mean) << ", rho " << cfg.rho << ")";
    return msg.str();
}

// One round against the matrix form
//   y+ = (I + 2 rho D)^-1 (rho (D + A) y - lambda + x),  lambda+ = lambda + rho L y+
// from a random state, then the optimality fixed point (y = mean, lambda = x - mean).
std::string check_consensus_step(std::size_t, Rng& rng, const SelfCheckHooks& hooks) {
    const std::size_t n = small_n(rng);
    const auto size = static_cast<Eigen::Index>(n);
    const Graph g = random_connected_graph(n, GnpModel{0.5}, rng());
    AdmmConfig cfg;
    cfg.rho = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
    const double rho = cfg.rho;

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(size, size);
    for (const Edge& e : g.edges()) {
        A(static_cast<Eigen::Index>(e.u), static_cast<Eigen::Index>(e.v)) = 1.0;
        A(static_cast<Eigen::Index>(e.v), static_cast<Eigen::Index>(e.u)) = 1.0;
    }
    const Eigen::VectorXd d = A.rowwise().sum();
    const Eigen::MatrixXd L = Eigen::MatrixXd(d.asDiagonal()) - A;
    const Eigen::MatrixXd P = Eigen::MatrixXd(d.asDiagonal()) + A;
    const Eigen::VectorXd scale = (1.0 + 2.0 * rho * d.array()).inverse().matrix();

    const Eigen::VectorXcd x = random_vector(rng, size);
    const Eigen::VectorXcd y = random_vector(rng, size);
    const Eigen::VectorXcd lambda = random_vector(rng, size);
    const Eigen::VectorXcd y_next = scale.asDiagonal() * (rho * P.cast<cd>() * y - lambda + x);
    const Eigen::VectorXcd lambda_next = lambda + rho * L.cast<cd>() * y_next;

    const std::vector<cd> xs(x.data(), x.data() + size);
    ConsensusState<cd> state{std::vector<cd>(y.data(), y.data() + size),
                             std::vector<cd>(lambda.data(), lambda.data() + size), 0};
    const ConsensusState<cd> got = hooks.admm_step(g, cfg, state, xs);
    for (Eigen::Index i = 0; i < size; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (std::abs(got.y[k] - y_next[i]) > 1e-12 * std::max(1.0, std::abs(y_next[i]))) {
            return "y-update differs from the recurrence at node " + std::to_string(k);
        }
        if (std::abs(got.lambda[k] - lambda_next[i]) > 1e-12 * std::max(1.0, std::abs(lambda_next[i]))) {
            return "lambda-update differs from the recurrence at node " + std::to_string(k);
        }
    }

    const cd mean = x.mean();
    ConsensusState<cd> fixed{std::vector<cd>(n, mean), std::vector<cd>(n), 0};
    for (std::size_t i = 0; i < n; ++i) fixed.lambda[i] = xs[i] - mean;
    const ConsensusState<cd> moved = hooks.admm_step(g, cfg, fixed, xs);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(moved.y[i] - fixed.y[i]) > 1e-12 || std::abs(moved.lambda[i] - fixed.lambda[i]) > 1e-12) {
            return "optimality fixed point is not stationary";
        }
    }
    return {};
}

std::string check_consensus_linearity(std::size_t, Rng& rng, const SelfCheckHooks& hooks) {
    const std::size_t n = small_n(rng);
    const Graph g = random_connected_graph(n, GnpModel{0.5}, rng());
    AdmmConfig cfg;
    cfg.rho = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
    std::vector<cd> x(n), xp(n), mix(n);
    const cd alpha = complex_gaussian(rng, 1.0);
    const cd beta = complex_gaussian(rng, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = complex_gaussian(rng, 1.0);
        xp[i] = complex_gaussian(rng, 1.0);
        mix[i] = alpha * x[i] + beta * xp[i];
    }
    auto s1 = ConsensusState<cd>::zeros(n);
    auto s2 = s1;
    auto s3 = s1;
    for (std::size_t k = 0; k < 50; ++k) {
        s1 = hooks.admm_step(g, cfg, s1, x);
        s2 = hooks.admm_step(g, cfg, s2, xp);
        s3 = hooks.admm_step(g, cfg, s3, mix);
        for (std::size_t i = 0; i < n; ++i) {
            const cd expect = alpha * s1.y[i] + beta * s2.y[i];
            if (std::abs(expect - s3.y[i]) > 1e-10 * std::max(1.0, std::abs(expect))) {
                return "trajectory is not linear in the initial values";
            }
        }
    }
    return {};
}

std::string check_equivalence(std::size_t, Rng& rng) {
    const std::size_t m = small_n(rng);
    const std::size_t n = small_n(rng);
    const GlobalModel gm = random_dense_model(rng(), m, n);
    const GainVector gains = random_gains(n, GainDomain::FixedEnergy, rng());
    const double eta0 = eta0_bound(gm, gm.sigma.minCoeff(), 1.01);
    const Eigen::MatrixXcd R = build_R(gm, gains.a, eta0);
    const double schur = schur_eta(gm, gains.a, eta0);
    if (!(schur > 0.0)) return "eta0 bound leaves eta <= 0";
    const double inverse = inverse_eta(R);
    const Eigen::VectorXcd y = update_y(R, YMethod::Solve);
    const Eigen::VectorXcd y_gs = update_y(R, YMethod::GramSchmidt);
    if (rel_gap(schur, inverse) > 1e-8) return "Schur complement != 1/(e1^H R^-1 e1)";
    if (rel_gap(schur, g_value(y, R)) > 1e-8) return "g(y*, a) != eta";
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (std::abs(y[i] - y_gs[i]) > 1e-8 * std::max(1.0, std::abs(y[i]))) {
            return "Gram-Schmidt and solve y-updates differ";
        }
    }
    return {};
}

std::string check_quadratic_identity(std::size_t, Rng& rng, const SelfCheckHooks& hooks) {
    const std::size_t m = small_n(rng);
    const std::size_t n = small_n(rng);
    const GlobalModel gm = random_dense_model(rng(), m, n);
    const Eigen::VectorXcd a = random_vector(rng, static_cast<Eigen::Index>(n));
    const Eigen::VectorXcd yt = random_vector(rng, static_cast<Eigen::Index>(m));
    const double eta0 = 3.0;
    const QuadraticForm form = hooks.build_q(gm, yt, eta0);

    const Eigen::MatrixXcd D = a.asDiagonal();
    const Eigen::MatrixXcd V = gm.v.cast<cd>().asDiagonal();
    const double lhs = (yt.adjoint() * gm.H * D * V * D.adjoint() * gm.H.adjoint() * yt)(0, 0).real();
    const double rhs = (a.adjoint() * form.Q.topLeftCorner(a.size(), a.size()) * a)(0, 0).real();
    if (rel_gap(lhs, rhs) > 1e-9) return "Hadamard identity fails";

    Eigen::VectorXcd y(m + 1), x(n + 1);
    y << 1.0, yt;
    x << a, 1.0;
    const double g = g_value(y, build_R(gm, a, eta0));
    const double split = form.c1 + (x.adjoint() * form.Q * x)(0, 0).real();
    if (rel_gap(g, split) > 1e-9) return "y^H R y != C1 + (a,1)^H Q (a,1)";
    return {};
}

std::string check_loading(std::size_t, Rng& rng) {
    const std::size_t m = small_n(rng);
    const std::size_t n = small_n(rng);
    const GlobalModel gm = random_dense_model(rng(), m, n);
    const Eigen::VectorXcd yt = random_vector(rng, static_cast<Eigen::Index>(m));
    const QuadraticForm form = build_Q(gm, yt, 1.0);
    const double lambda = OptimizerConfig{}.lambda_margin * std::max(max_eigenvalue(form.Q), 0.0) +
                          kLoadingEpsilon;
    Eigen::MatrixXcd loaded = -form.Q;
    loaded.diagonal().array() += lambda;
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(loaded).eigenvalues().minCoeff();
    if (min_eig < -1e-9) return "loaded Q has eigenvalue " + std::to_string(min_eig);
    return {};
}

std::string check_optimizer(std::size_t c, Rng& rng) {
    const GainDomain domain = (c % 2 == 0) ? GainDomain::FixedEnergy : GainDomain::Unimodular;
    const std::size_t n = small_n(rng);
    GlobalModel gm;
    double sigma_n_sq = 0.0;
    GainVector start;
    if (c % 4 < 2) {
        const NetworkModel model = random_network(rng(), n);
        start = GainVector::all_ones(n, domain);
        gm = build_global_model(model, select_retainers(model.graph, local_information_values(model, start)));
        sigma_n_sq = model.sigma_n_sq;
    } else {
        gm = random_dense_model(rng(), small_n(rng), n);
        start = random_gains(n, domain, rng());
        sigma_n_sq = gm.sigma.minCoeff();
    }
    OptimizerConfig cfg;
    cfg.throw_on_cap = false;
    const OptTrace trace = optimize(gm, cfg, start, sigma_n_sq);
    for (std::size_t k = 1; k < trace.eta.size(); ++k) {
        if (trace.eta[k] > trace.eta[k - 1] + 1e-10) return "eta increased at cycle " + std::to_string(k);
        if (!trace.inner_monotone[k]) return "power iterations not monotone at cycle " + std::to_string(k);
    }
    if (!trace.gains.feasible()) return "final gains leave their domain";
    return {};
}

}  // namespace

bool SelfCheckReport::passed() const {
    for (const auto& p : properties) {
        if (!p.passed()) return false;
    }
    return true;
}

std::optional<std::string> SelfCheckReport::first_failing() const {
    for (const auto& p : properties) {
        if (!p.passed()) return p.name;
    }
    return std::nullopt;
}

SelfCheckReport run_selfcheck(std::uint64_t seed, std::size_t cases, const SelfCheckHooks& hooks) {
    SelfCheckReport report;
    auto add = [&](const std::string& name, std::uint64_t tag,
                   const std::function<std::string(std::size_t, Rng&)>& check) {
        report.properties.push_back(run_property(name, derive_seed(seed, tag), cases, check));
    };
    add("topology.connected_symmetric_deterministic", 1, check_topology);
    add("network_model.information_phase_invariance", 2, check_phase_invariance);
    add("fusion.information_partition", 3, check_partition);
    add("consensus.step_recurrence", 10,
        [&](std::size_t c, Rng& r) { return check_consensus_step(c, r, hooks); });
    add("consensus.limit_is_mean", 4, [&](std::size_t c, Rng& r) { return check_consensus_limit(c, r, hooks); });
    add("consensus.linearity", 5, [&](std::size_t c, Rng& r) { return check_consensus_linearity(c, r, hooks); });
    add("gain_optimizer.equivalence_chain", 6, check_equivalence);
    add("gain_optimizer.hadamard_identity", 7,
        [&](std::size_t c, Rng& r) { return check_quadratic_identity(c, r, hooks); });
    add("gain_optimizer.diagonal_loading", 8, check_loading);
    add("gain_optimizer.monotone_feasible", 9, check_optimizer);
    return report;
}

}  // namespace wsn
