#include "wsnest/experiment.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "wsnest/error.hpp"
#include "wsnest/io.hpp"
#include "wsnest/rng.hpp"

namespace wsn {

using nlohmann::json;

void ExperimentConfig::validate() const {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");
    if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
    if (sigma_v_sq.empty()) throw Error(ErrorCode::InvalidArgument, "sigma_v_sq is empty");
    for (double s : sigma_v_sq) {
        if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma_v_sq entries must be > 0");
    }
    if (!(sigma_n_sq >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma_n_sq must be >= 0");
    if (std::holds_alternative<std::monostate>(topology)) {
        throw Error(ErrorCode::InvalidArgument, "topology must be geometric or gnp");
    }
    admm.validate();
    opt.validate();
}

namespace {

GainDomain parse_domain(const std::string& s) {
    if (s == "fixed-energy") return GainDomain::FixedEnergy;
    if (s == "unimodular") return GainDomain::Unimodular;
    throw Error(ErrorCode::Parse, "unknown constraint '" + s + "'");
}

std::string domain_name(GainDomain d) {
    return d == GainDomain::FixedEnergy ? "fixed-energy" : "unimodular";
}

std::vector<double> node_variances(const ExperimentConfig& cfg, std::size_t n) {
    if (cfg.sigma_v_sq.size() == 1) return std::vector<double>(n, cfg.sigma_v_sq.front());
    if (cfg.sigma_v_sq.size() != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    "per-node sigma_v_sq has " + std::to_string(cfg.sigma_v_sq.size()) +
                        " entries for n = " + std::to_string(n));
    }
    return cfg.sigma_v_sq;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    try {
        ExperimentConfig cfg;
        cfg.n = j.value("n", cfg.n);
        if (j.contains("topology")) {
            const auto& t = j.at("topology");
            const std::string type = t.at("type").get<std::string>();
            if (type == "geometric") {
                cfg.topology = GeometricModel{t.value("radius", 0.5)};
            } else if (type == "gnp") {
                cfg.topology = GnpModel{t.value("p", 0.5)};
            } else {
                throw Error(ErrorCode::Parse, "unknown topology '" + type + "'");
            }
        }
        if (j.contains("channels")) {
            const auto& c = j.at("channels");
            const std::string kind = c.value("kind", std::string("complex_gaussian"));
            if (kind == "unit") {
                cfg.channels.kind = ChannelSpec::Kind::Unit;
            } else if (kind == "complex_gaussian") {
                cfg.channels.kind = ChannelSpec::Kind::ComplexGaussian;
            } else {
                throw Error(ErrorCode::Parse, "unknown channel kind '" + kind + "'");
            }
            cfg.channels.sigma_h = c.value("sigma_h", 1.0);
            cfg.channels.reciprocal = c.value("reciprocal", false);
        }
        if (j.contains("sigma_v_sq")) {
            const auto& s = j.at("sigma_v_sq");
            cfg.sigma_v_sq = s.is_array() ? s.get<std::vector<double>>()
                                          : std::vector<double>{s.get<double>()};
        }
        cfg.sigma_n_sq = j.value("sigma_n_sq", cfg.sigma_n_sq);
        if (j.contains("theta")) {
            const auto& t = j.at("theta");
            cfg.theta = t.is_array() ? cd{t.at(0).get<double>(), t.at(1).get<double>()}
                                     : cd{t.get<double>(), 0.0};
        }
        cfg.noisy_self_link = j.value("noisy_self_link", cfg.noisy_self_link);
        if (j.contains("constraint")) cfg.domain = parse_domain(j.at("constraint").get<std::string>());
        if (j.contains("admm")) {
            const auto& a = j.at("admm");
            cfg.admm.rho = a.value("rho", cfg.admm.rho);
            cfg.admm.max_iter = a.value("max_iter", cfg.admm.max_iter);
            cfg.admm.tol = a.value("tol", cfg.admm.tol);
        }
        if (j.contains("optimizer")) {
            const auto& o = j.at("optimizer");
            cfg.opt.eta0_factor = o.value("eta0_factor", cfg.opt.eta0_factor);
            cfg.opt.lambda_margin = o.value("lambda_margin", cfg.opt.lambda_margin);
            cfg.opt.xi = o.value("xi", cfg.opt.xi);
            cfg.opt.inner_iters = o.value("inner_iters", cfg.opt.inner_iters);
            cfg.opt.inner_tol = o.value("inner_tol", cfg.opt.inner_tol);
            cfg.opt.max_outer = o.value("max_outer", cfg.opt.max_outer);
            cfg.opt.throw_on_cap = o.value("throw_on_cap", cfg.opt.throw_on_cap);
            const std::string method = o.value("y_method", std::string("solve"));
            if (method == "solve") {
                cfg.opt.y_method = YMethod::Solve;
            } else if (method == "gram_schmidt") {
                cfg.opt.y_method = YMethod::GramSchmidt;
            } else {
                throw Error(ErrorCode::Parse, "unknown y_method '" + method + "'");
            }
        }
        cfg.trials = j.value("trials", cfg.trials);
        cfg.master_seed = j.value("master_seed", cfg.master_seed);
        cfg.n_list = j.value("n_list", cfg.n_list);
        cfg.reselect_rounds = j.value("reselect_rounds", cfg.reselect_rounds);
        cfg.threads = j.value("threads", cfg.threads);
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
}

json config_to_json(const ExperimentConfig& cfg) {
    json topology;
    if (const auto* geo = std::get_if<GeometricModel>(&cfg.topology)) {
        topology = {{"type", "geometric"}, {"radius", geo->radius}};
    } else if (const auto* gnp = std::get_if<GnpModel>(&cfg.topology)) {
        topology = {{"type", "gnp"}, {"p", gnp->p}};
    }
    return {
        {"n", cfg.n},
        {"topology", topology},
        {"channels",
         {{"kind", cfg.channels.kind == ChannelSpec::Kind::Unit ? "unit" : "complex_gaussian"},
          {"sigma_h", cfg.channels.sigma_h},
          {"reciprocal", cfg.channels.reciprocal}}},
        {"sigma_v_sq", cfg.sigma_v_sq},
        {"sigma_n_sq", cfg.sigma_n_sq},
        {"theta", {cfg.theta.real(), cfg.theta.imag()}},
        {"noisy_self_link", cfg.noisy_self_link},
        {"constraint", domain_name(cfg.domain)},
        {"admm", {{"rho", cfg.admm.rho}, {"max_iter", cfg.admm.max_iter}, {"tol", cfg.admm.tol}}},
        {"optimizer",
         {{"eta0_factor", cfg.opt.eta0_factor},
          {"lambda_margin", cfg.opt.lambda_margin},
          {"xi", cfg.opt.xi},
          {"inner_iters", cfg.opt.inner_iters},
          {"inner_tol", cfg.opt.inner_tol},
          {"max_outer", cfg.opt.max_outer},
          {"throw_on_cap", cfg.opt.throw_on_cap},
          {"y_method", cfg.opt.y_method == YMethod::Solve ? "solve" : "gram_schmidt"}}},
        {"trials", cfg.trials},
        {"master_seed", cfg.master_seed},
        {"n_list", cfg.n_list},
        {"reselect_rounds", cfg.reselect_rounds},
        {"threads", cfg.threads},
    };
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t n, std::size_t trial) {
    return derive_seed(derive_seed(cfg.master_seed, n), trial);
}

Scenario make_scenario(const ExperimentConfig& cfg, std::size_t n, std::size_t trial) {
    Scenario scenario;
    scenario.seed = trial_seed(cfg, n, trial);
    NetworkModel& model = scenario.model;
    model.graph = random_connected_graph(n, cfg.topology, derive_seed(scenario.seed, stream::graph));
    model.h = sample_channels(model.graph, cfg.channels, derive_seed(scenario.seed, stream::channels));
    model.sigma_v_sq = node_variances(cfg, n);
    model.sigma_n_sq = cfg.sigma_n_sq;
    model.theta = cfg.theta;
    model.noisy_self_link = cfg.noisy_self_link;
    model.validate();
    return scenario;
}

GainVector random_gains(std::size_t n, GainDomain domain, std::uint64_t seed) {
    Rng rng(seed);
    GainVector gains{Eigen::VectorXcd(static_cast<Eigen::Index>(n)), domain};
    if (domain == GainDomain::Unimodular) {
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        for (Eigen::Index i = 0; i < gains.a.size(); ++i) gains.a[i] = std::polar(1.0, phase(rng));
        return gains;
    }
    for (Eigen::Index i = 0; i < gains.a.size(); ++i) gains.a[i] = complex_gaussian(rng, 1.0);
    gains.a *= std::sqrt(static_cast<double>(n)) / gains.a.norm();
    return gains;
}

GainDesign design_gains(const NetworkModel& model, const ExperimentConfig& cfg,
                        std::size_t max_rounds) {
    GainDesign design;
    GainVector gains = GainVector::all_ones(model.size(), cfg.domain);
    SelectionPlan plan = select_retainers(model.graph, local_information_values(model, gains));
    GlobalModel gm = build_global_model(model, plan);
    design.initial_variance = ml_variance(gm, gains.a);
    design.gains = gains;
    design.plan = plan;
    design.gm = gm;
    design.variance = design.initial_variance;

    auto consider = [&](const GainVector& g, const SelectionPlan& p, const GlobalModel& m) {
        const double var = ml_variance(m, g.a);
        if (var < design.variance) {
            design.variance = var;
            design.gains = g;
            design.plan = p;
            design.gm = m;
        }
    };

    for (std::size_t round = 0; round < std::max<std::size_t>(max_rounds, 1); ++round) {
        design.traces.push_back(optimize(gm, cfg.opt, gains, model.sigma_n_sq));
        gains = design.traces.back().gains;
        consider(gains, plan, gm);

        SelectionPlan next = select_retainers(model.graph, local_information_values(model, gains));
        if (next.retainer == plan.retainer) break;
        plan = std::move(next);
        gm = build_global_model(model, plan);
        consider(gains, plan, gm);
    }
    return design;
}

ConvergenceResult run_convergence(const ExperimentConfig& cfg) {
    cfg.validate();
    ConvergenceResult result;
    result.scenario = make_scenario(cfg, cfg.n, 0);
    const NetworkModel& model = result.scenario.model;
    result.design = design_gains(model, cfg, cfg.reselect_rounds);
    const GlobalModel& gm = result.design.gm;
    const Eigen::VectorXcd& a = result.design.gains.a;

    const Observations obs = sample_observations(model, derive_seed(result.scenario.seed, stream::noise));
    const Eigen::VectorXcd y = received_vector(gm, a, obs);
    const InformationSplit split = decompose_information(gm, a, &y);
    result.centralized = ml_estimate(y, gm, a);
    result.variance = ml_variance(gm, a);

    const std::vector<double> I0(split.I.data(), split.I.data() + split.I.size());
    const std::vector<cd> P0(split.P->data(), split.P->data() + split.P->size());
    result.trace = decentralized_mle(model.graph, cfg.admm, I0, P0);
    return result;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
}

std::vector<SweepRow> run_variance_sweep(const ExperimentConfig& cfg,
                                         const std::vector<std::size_t>& n_list,
                                         const std::function<void(const SweepRow&)>& on_row) {
    cfg.validate();
    struct Outcome {
        bool ok = false;
        double optimized = 0.0;
        double all_ones = 0.0;
        double random = 0.0;
        std::string error;
    };

    std::vector<SweepRow> rows;
    for (std::size_t n : n_list) {
        std::vector<Outcome> outcomes(cfg.trials);
        parallel_for(cfg.trials, cfg.threads, [&](std::size_t trial) {
            Outcome& out = outcomes[trial];
            try {
                const Scenario scenario = make_scenario(cfg, n, trial);
                const NetworkModel& model = scenario.model;
                const GainVector ones = GainVector::all_ones(n, cfg.domain);
                const SelectionPlan plan = select_retainers(model.graph, local_information_values(model, ones));
                const GlobalModel gm = build_global_model(model, plan);
                out.all_ones = ml_variance(gm, ones.a);
                out.optimized = ml_variance(gm, optimize(gm, cfg.opt, ones, model.sigma_n_sq).gains.a);
                out.random = ml_variance(
                    gm, random_gains(n, cfg.domain, derive_seed(scenario.seed, stream::gains)).a);
                out.ok = true;
            } catch (const Error& e) {
                out.error = "trial " + std::to_string(trial) + ": " + e.what();
            }
        });

        SweepRow row;
        row.n = n;
        row.trials = cfg.trials;
        std::size_t improved = 0;
        for (const Outcome& out : outcomes) {
            if (!out.ok) {
                if (row.failures++ == 0) row.first_error = out.error;
                continue;
            }
            row.mean_var_optimized += out.optimized;
            row.mean_var_all_ones += out.all_ones;
            row.mean_var_random += out.random;
            if (out.optimized <= out.all_ones * (1.0 + kImprovementSlack)) ++improved;
        }
        const std::size_t ok = row.trials - row.failures;
        if (ok > 0) {
            row.mean_var_optimized /= static_cast<double>(ok);
            row.mean_var_all_ones /= static_cast<double>(ok);
            row.mean_var_random /= static_cast<double>(ok);
            row.improved_fraction = static_cast<double>(improved) / static_cast<double>(ok);
        }
        if (on_row) on_row(row);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_header(std::ostream& out) {
    out << "n,trials,failures,mean_var_optimized,mean_var_all_ones,mean_var_random,improved_fraction\n";
}

void write_sweep_row(std::ostream& out, const SweepRow& row) {
    out << row.n << ',' << row.trials << ',' << row.failures << ','
        << io::format_double(row.mean_var_optimized) << ',' << io::format_double(row.mean_var_all_ones)
        << ',' << io::format_double(row.mean_var_random) << ','
        << io::format_double(row.improved_fraction) << '\n';
}

}  // namespace wsn
