#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wsnest/consensus.hpp"
#include "wsnest/fusion.hpp"
#include "wsnest/gain_optimizer.hpp"
#include "wsnest/network_model.hpp"

namespace wsn {

/// Drivers keep the (monotone) best-so-far gains when the outer cap is hit.
inline OptimizerConfig driver_optimizer_defaults() {
    OptimizerConfig cfg;
    cfg.throw_on_cap = false;
    return cfg;
}

struct ExperimentConfig {
    std::size_t n = 16;
    GraphModel topology = GeometricModel{0.5};
    ChannelSpec channels;
    std::vector<double> sigma_v_sq{1.0};  // a single value applies to every node
    double sigma_n_sq = 0.1;
    cd theta{10.0, 0.0};
    bool noisy_self_link = false;
    GainDomain domain = GainDomain::FixedEnergy;
    AdmmConfig admm;
    OptimizerConfig opt = driver_optimizer_defaults();
    std::size_t trials = 300;
    std::uint64_t master_seed = 1;
    std::vector<std::size_t> n_list{4, 8, 12, 16};
    std::size_t reselect_rounds = 5;
    std::size_t threads = 1;

    void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Seed of trial `trial` for network size n:
///   derive_seed(derive_seed(master_seed, n), trial)
/// Graph, channels, noise and random gains then use derive_seed(trial_seed, stream::*).
std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t n, std::size_t trial);

struct Scenario {
    NetworkModel model;
    std::uint64_t seed = 0;
};

Scenario make_scenario(const ExperimentConfig& cfg, std::size_t n, std::size_t trial);

/// Gains, selection and model chosen by alternating frozen-plan optimization
/// with re-selection; the best round (lowest variance) is kept.
struct GainDesign {
    GainVector gains;
    SelectionPlan plan;
    GlobalModel gm;
    double initial_variance = 0.0;  // all-ones gains under their own plan
    double variance = 0.0;
    std::vector<OptTrace> traces;   // one per optimization round
};

GainDesign design_gains(const NetworkModel& model, const ExperimentConfig& cfg,
                        std::size_t max_rounds);

struct ConvergenceResult {
    Scenario scenario;
    GainDesign design;
    cd centralized{};
    double variance = 0.0;
    MleTrace trace;
};

ConvergenceResult run_convergence(const ExperimentConfig& cfg);

struct SweepRow {
    std::size_t n = 0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double mean_var_optimized = 0.0;
    double mean_var_all_ones = 0.0;
    double mean_var_random = 0.0;
    double improved_fraction = 0.0;  // optimized <= all-ones (relative slack kImprovementSlack)
    std::string first_error;
};

inline constexpr double kImprovementSlack = 1e-12;

/// One row per n. `on_row` fires as each n completes so callers can flush.
std::vector<SweepRow> run_variance_sweep(const ExperimentConfig& cfg,
                                         const std::vector<std::size_t>& n_list,
                                         const std::function<void(const SweepRow&)>& on_row = {});

void write_sweep_header(std::ostream& out);
void write_sweep_row(std::ostream& out, const SweepRow& row);

/// Random feasible gains in `domain`.
GainVector random_gains(std::size_t n, GainDomain domain, std::uint64_t seed);

/// Runs fn(0..count-1) on up to `threads` workers; fn must only touch its own index.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace wsn
