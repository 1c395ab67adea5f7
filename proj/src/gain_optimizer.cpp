#include "wsnest/gain_optimizer.hpp"

#include <cmath>
#include <string>

#include "wsnest/error.hpp"

namespace wsn {

namespace {

void check_model(const GlobalModel& gm, const Eigen::VectorXcd& a) {
    if (gm.sigma.size() != gm.M() || gm.v.size() != gm.N()) {
        throw Error(ErrorCode::DimensionMismatch, "global model containers disagree in size");
    }
    if (a.size() != gm.N()) {
        throw Error(ErrorCode::DimensionMismatch, "gain vector length " + std::to_string(a.size()) +
                                                      " != N = " + std::to_string(gm.N()));
    }
}

Eigen::MatrixXcd combined_covariance_dense(const GlobalModel& gm, const Eigen::VectorXcd& a) {
    const Eigen::VectorXd power = (a.cwiseAbs2().array() * gm.v.array()).matrix();
    Eigen::MatrixXcd c = gm.H * power.asDiagonal() * gm.H.adjoint();
    c.diagonal() += gm.sigma.cast<cd>();
    return c;
}

double quadratic(const Eigen::VectorXcd& x, const Eigen::MatrixXcd& m) {
    return (x.adjoint() * m * x)(0, 0).real();
}

Eigen::VectorXcd augmented(const Eigen::VectorXcd& a) {
    Eigen::VectorXcd x(a.size() + 1);
    x.head(a.size()) = a;
    x[a.size()] = 1.0;
    return x;
}

}  // namespace

void OptimizerConfig::validate() const {
    if (!(eta0_factor > 1.0)) throw Error(ErrorCode::InvalidArgument, "eta0_factor must be > 1");
    if (!(lambda_margin >= 1.0)) throw Error(ErrorCode::InvalidArgument, "lambda_margin must be >= 1");
    if (!(xi > 0.0) || !(inner_tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "xi and inner_tol must be positive");
    }
    if (inner_iters == 0 || max_outer == 0) {
        throw Error(ErrorCode::InvalidArgument, "iteration caps must be positive");
    }
}

double eta0_bound(const GlobalModel& gm, double sigma_n_sq, double factor) {
    if (!(sigma_n_sq > 0.0)) {
        throw Error(ErrorCode::ZeroTransmissionNoise, "eta0 bound needs sigma_n^2 > 0");
    }
    if (gm.sigma.size() != gm.M() || gm.v.size() != gm.N()) {
        throw Error(ErrorCode::DimensionMismatch, "global model containers disagree in size");
    }
    double noisy_frobenius = 0.0;
    double noiseless_info = 0.0;
    for (Eigen::Index r = 0; r < gm.M(); ++r) {
        if (gm.sigma[r] > 0.0) {
            noisy_frobenius += gm.H.row(r).squaredNorm();
            continue;
        }
        Eigen::Index nonzero = 0;
        Eigen::Index column = 0;
        for (Eigen::Index c = 0; c < gm.N(); ++c) {
            if (gm.H(r, c) != cd{}) {
                ++nonzero;
                column = c;
            }
        }
        if (nonzero > 1) {
            throw Error(ErrorCode::ZeroTransmissionNoise,
                        "noiseless row " + std::to_string(r) + " mixes several senders");
        }
        if (nonzero == 1) noiseless_info += 1.0 / gm.v[column];
    }
    const double n = static_cast<double>(gm.N());
    return factor * (n * noisy_frobenius / sigma_n_sq + noiseless_info);
}

Eigen::MatrixXcd build_R(const GlobalModel& gm, const Eigen::VectorXcd& a, double eta0) {
    check_model(gm, a);
    const Eigen::Index m = gm.M();
    const Eigen::VectorXcd ha = gm.H * a;
    Eigen::MatrixXcd R(m + 1, m + 1);
    R(0, 0) = eta0;
    R.block(1, 0, m, 1) = ha;
    R.block(0, 1, 1, m) = ha.adjoint();
    R.bottomRightCorner(m, m) = combined_covariance_dense(gm, a);
    return R;
}

double dense_information(const GlobalModel& gm, const Eigen::VectorXcd& a) {
    check_model(gm, a);
    const Eigen::LDLT<Eigen::MatrixXcd> ldlt(combined_covariance_dense(gm, a));
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-15)) {
        throw Error(ErrorCode::SingularCovariance, "combined covariance is singular");
    }
    const Eigen::VectorXcd ha = gm.H * a;
    return (ha.adjoint() * ldlt.solve(ha))(0, 0).real();
}

double schur_eta(const GlobalModel& gm, const Eigen::VectorXcd& a, double eta0) {
    return eta0 - dense_information(gm, a);
}

double inverse_eta(const Eigen::MatrixXcd& R) {
    const Eigen::LDLT<Eigen::MatrixXcd> ldlt(R);
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-15)) {
        throw Error(ErrorCode::SingularR, "R is singular");
    }
    const Eigen::VectorXcd e1 = Eigen::VectorXcd::Unit(R.rows(), 0);
    return 1.0 / ldlt.solve(e1)[0].real();
}

Eigen::VectorXcd update_y(const Eigen::MatrixXcd& R, YMethod method) {
    const Eigen::Index size = R.rows();
    if (R.cols() != size || size == 0) throw Error(ErrorCode::DimensionMismatch, "R must be square");

    Eigen::VectorXcd y;
    if (method == YMethod::Solve) {
        const Eigen::LDLT<Eigen::MatrixXcd> ldlt(R);
        if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-15)) {
            throw Error(ErrorCode::SingularR, "R is singular");
        }
        y = ldlt.solve(Eigen::VectorXcd::Unit(size, 0));
    } else {
        // Row k of a Hermitian R is the conjugate of column k, so y must be
        // orthogonal (standard inner product) to columns 2..M+1.
        Eigen::MatrixXcd basis(size, size - 1);
        const double scale = R.norm();
        for (Eigen::Index k = 1; k < size; ++k) {
            Eigen::VectorXcd q = R.col(k);
            for (int pass = 0; pass < 2; ++pass) {
                for (Eigen::Index j = 0; j < k - 1; ++j) {
                    q -= basis.col(j) * basis.col(j).dot(q);
                }
            }
            const double norm = q.norm();
            if (!(norm > 1e-14 * scale)) {
                throw Error(ErrorCode::SingularR, "rows of R are linearly dependent");
            }
            basis.col(k - 1) = q / norm;
        }
        y = Eigen::VectorXcd::Unit(size, 0);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < size - 1; ++j) y -= basis.col(j) * basis.col(j).dot(y);
        }
    }
    const cd head = y[0];
    if (!(std::abs(head) > 1e-300) || !std::isfinite(std::abs(head))) {
        throw Error(ErrorCode::SingularR, "e1 lies in the span of the lower rows of R");
    }
    y /= head;
    y[0] = 1.0;
    return y;
}

double g_value(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& R) {
    if (y.size() != R.rows()) throw Error(ErrorCode::DimensionMismatch, "y and R sizes differ");
    return quadratic(y, R);
}

QuadraticForm build_Q(const GlobalModel& gm, const Eigen::VectorXcd& ytilde, double eta0) {
    if (ytilde.size() != gm.M() || gm.v.size() != gm.N() || gm.sigma.size() != gm.M()) {
        throw Error(ErrorCode::DimensionMismatch, "ytilde length differs from M");
    }
    const Eigen::Index n = gm.N();
    const Eigen::VectorXcd b = gm.H.adjoint() * ytilde;  // H^H ytilde
    const Eigen::MatrixXcd V = gm.v.cast<cd>().asDiagonal();

    QuadraticForm form;
    form.Q = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    form.Q.topLeftCorner(n, n) = (b * b.adjoint()).cwiseProduct(V);
    form.Q.block(0, n, n, 1) = b;
    form.Q.block(n, 0, 1, n) = b.adjoint();
    form.c1 = eta0 + (ytilde.cwiseAbs2().array() * gm.sigma.array()).sum();
    return form;
}

double max_eigenvalue(const Eigen::MatrixXcd& hermitian, std::size_t iterations) {
    const Eigen::Index n = hermitian.rows();
    if (n == 0) return 0.0;
    const double shift = hermitian.norm();
    if (shift == 0.0) return 0.0;
    Eigen::MatrixXcd shifted = hermitian;
    shifted.diagonal().array() += shift;

    Eigen::VectorXcd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = 1.0 / std::sqrt(static_cast<double>(i + 1));
    x.normalize();
    for (std::size_t t = 0; t < iterations; ++t) {
        Eigen::VectorXcd next = shifted * x;
        const double norm = next.norm();
        if (norm == 0.0) break;
        x = next / norm;
    }
    return quadratic(x, shifted) - shift;
}

Eigen::VectorXcd project_to_domain(const Eigen::VectorXcd& ahat, GainDomain domain) {
    if (domain == GainDomain::FixedEnergy) {
        const double norm = ahat.norm();
        if (norm == 0.0) throw Error(ErrorCode::ZeroVector, "cannot project the zero vector");
        return std::sqrt(static_cast<double>(ahat.size())) * ahat / norm;
    }
    Eigen::VectorXcd out(ahat.size());
    for (Eigen::Index i = 0; i < ahat.size(); ++i) {
        out[i] = std::polar(1.0, ahat[i] == cd{} ? 0.0 : std::arg(ahat[i]));
    }
    return out;
}

PowerIterationResult power_iterate(const GainVector& start, const Eigen::MatrixXcd& Q,
                                   const OptimizerConfig& cfg) {
    const Eigen::Index n = start.a.size();
    if (Q.rows() != n + 1 || Q.cols() != n + 1) {
        throw Error(ErrorCode::DimensionMismatch, "Q must be (N+1) x (N+1)");
    }
    PowerIterationResult result;
    result.gains = start;
    result.loading = cfg.lambda_margin * std::max(max_eigenvalue(Q), 0.0) + kLoadingEpsilon;
    Eigen::MatrixXcd loaded = -Q;
    loaded.diagonal().array() += result.loading;

    Eigen::VectorXcd x = augmented(start.a);
    double objective = quadratic(x, loaded);
    result.objective_start = objective;

    for (std::size_t t = 0; t < cfg.inner_iters; ++t) {
        const Eigen::VectorXcd ahat = (loaded * x).head(n);
        Eigen::VectorXcd next;
        try {
            next = project_to_domain(ahat, start.domain);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ZeroVector) throw;
            result.zero_vector = true;
            break;
        }
        const double step = (next - x.head(n)).cwiseAbs().maxCoeff();
        x.head(n) = next;
        const double updated = quadratic(x, loaded);
        if (updated < objective - 1e-10 * std::max(1.0, std::abs(objective))) result.monotone = false;
        objective = updated;
        result.iterations = t + 1;
        if (step <= cfg.inner_tol) break;
    }
    result.gains.a = x.head(n);
    result.objective_end = objective;
    return result;
}

OptTrace optimize(const GlobalModel& gm, const OptimizerConfig& cfg, const GainVector& a_init,
                  double sigma_n_sq) {
    cfg.validate();
    check_model(gm, a_init.a);
    if (!a_init.feasible()) throw Error(ErrorCode::InvalidArgument, "initial gains violate their domain");

    OptTrace trace;
    trace.eta0 = eta0_bound(gm, sigma_n_sq, cfg.eta0_factor);
    trace.gains = a_init;

    auto record = [&](double eta, std::size_t inner, bool monotone) {
        trace.eta.push_back(eta);
        trace.variance.push_back(1.0 / (trace.eta0 - eta));
        trace.inner_iters.push_back(inner);
        trace.inner_monotone.push_back(monotone);
    };
    record(schur_eta(gm, a_init.a, trace.eta0), 0, true);

    for (std::size_t k = 1; k <= cfg.max_outer; ++k) {
        const Eigen::VectorXcd y = update_y(build_R(gm, trace.gains.a, trace.eta0), cfg.y_method);
        const QuadraticForm form = build_Q(gm, y.tail(gm.M()), trace.eta0);
        const PowerIterationResult step = power_iterate(trace.gains, form.Q, cfg);
        trace.gains = step.gains;
        record(schur_eta(gm, trace.gains.a, trace.eta0), step.iterations, step.monotone);
        trace.outer_iters = k;
        const double change = std::abs(trace.eta[k - 1] - trace.eta[k]);
        if (change <= cfg.xi) {
            trace.converged = true;
            return trace;
        }
    }
    if (!cfg.throw_on_cap) return trace;
    throw NotConvergedError("gain optimization after " + std::to_string(cfg.max_outer) + " cycles",
                            std::abs(trace.eta[trace.eta.size() - 2] - trace.eta.back()));
}

}  // namespace wsn
