#pragma once

#include <vector>

#include <Eigen/Dense>

#include "wsnest/fusion.hpp"
#include "wsnest/network_model.hpp"

namespace wsn {

enum class YMethod { Solve, GramSchmidt };

struct OptimizerConfig {
    double eta0_factor = 1.01;      // > 1, applied to the eta0 lower bound
    double lambda_margin = 1.05;    // >= 1, applied to lambda_max(Q)
    double xi = 1e-8;               // outer stop on |eta_k - eta_{k+1}|
    std::size_t inner_iters = 500;
    double inner_tol = 1e-10;       // on ||a+ - a||_inf
    std::size_t max_outer = 200;
    YMethod y_method = YMethod::Solve;
    bool throw_on_cap = true;       // NotConvergedError when max_outer is hit

    void validate() const;
};

inline constexpr double kLoadingEpsilon = 1e-9;
inline constexpr std::size_t kEigenPowerIterations = 200;

/// Lower bound that keeps eta = eta0 - a^H H^H C^-1 H a positive for every a
/// with ||a||^2 <= N:  factor * (N ||H_noisy||_F^2 / sigma_n^2 + sum 1/sigma_v,s^2)
/// where the second sum runs over rows without transmission noise (each must
/// hold a single entry, as self rows do). Throws ZeroTransmissionNoise when
/// sigma_n_sq <= 0 or a noiseless row mixes several senders.
double eta0_bound(const GlobalModel& gm, double sigma_n_sq, double factor);

/// R = [[eta0, (Ha)^H], [Ha, H D V D^H H^H + Sigma]], size (M+1) x (M+1).
Eigen::MatrixXcd build_R(const GlobalModel& gm, const Eigen::VectorXcd& a, double eta0);

/// Dense a^H H^H C^-1 H a with C = H D V D^H H^H + Sigma (no diagonality assumed).
double dense_information(const GlobalModel& gm, const Eigen::VectorXcd& a);

/// eta as the Schur complement of the C-block of R.
double schur_eta(const GlobalModel& gm, const Eigen::VectorXcd& a, double eta0);

/// eta as 1 / (e1^H R^-1 e1).
double inverse_eta(const Eigen::MatrixXcd& R);

/// Minimizer of y^H R y subject to y_1 = 1: the first column of R^-1 scaled to
/// a unit first entry. GramSchmidt orthogonalizes rows 2..M+1 of R and takes
/// the residual of e1. Throws SingularR.
Eigen::VectorXcd update_y(const Eigen::MatrixXcd& R, YMethod method = YMethod::Solve);

/// y^H R y (real for Hermitian R).
double g_value(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& R);

/// y^H R y = c1 + (a,1)^H Q (a,1) for y = (1, ytilde).
struct QuadraticForm {
    Eigen::MatrixXcd Q;  // (N+1) x (N+1)
    double c1 = 0.0;
};

QuadraticForm build_Q(const GlobalModel& gm, const Eigen::VectorXcd& ytilde, double eta0);

/// Largest eigenvalue of a Hermitian matrix by power iteration on the
/// Frobenius-shifted matrix.
double max_eigenvalue(const Eigen::MatrixXcd& hermitian,
                      std::size_t iterations = kEigenPowerIterations);

/// Nearest point of the gain domain to `ahat` in the sense of max Re(a^H ahat).
/// FixedEnergy: sqrt(N) ahat / ||ahat||; Unimodular: exp(j arg ahat_i), arg 0 := 0.
/// Throws ZeroVector for ahat = 0 under FixedEnergy.
Eigen::VectorXcd project_to_domain(const Eigen::VectorXcd& ahat, GainDomain domain);

struct PowerIterationResult {
    GainVector gains;
    std::size_t iterations = 0;
    double objective_start = 0.0;  // (a,1)^H Qt (a,1) at entry
    double objective_end = 0.0;
    bool monotone = true;          // objective never dropped by more than the slack
    bool zero_vector = false;      // stopped on ahat = 0
    double loading = 0.0;          // lambda in Qt = lambda I - Q
};

/// Maximizes (a,1)^H (lambda I - Q) (a,1) over the domain of `start` by
/// a+ = project(first N entries of Qt (a,1)).
PowerIterationResult power_iterate(const GainVector& start, const Eigen::MatrixXcd& Q,
                                   const OptimizerConfig& cfg);

struct OptTrace {
    std::vector<double> eta;                 // eta[0] at a_init, then one per outer cycle
    std::vector<double> variance;            // 1 / (eta0 - eta)
    std::vector<std::size_t> inner_iters;    // inner_iters[0] = 0
    std::vector<bool> inner_monotone;
    GainVector gains;
    double eta0 = 0.0;
    std::size_t outer_iters = 0;
    bool converged = false;         // xi criterion met before max_outer

    double initial_variance() const { return variance.front(); }
    double final_variance() const { return variance.back(); }
};

/// Cyclic minimization of eta over y and a. The model (and its selection plan)
/// stays fixed; R is rebuilt from the current gains every cycle. After
/// max_outer cycles either throws NotConvergedError (throw_on_cap) or returns
/// the trace with converged = false.
OptTrace optimize(const GlobalModel& gm, const OptimizerConfig& cfg, const GainVector& a_init,
                  double sigma_n_sq);

}  // namespace wsn
