// Experiment driver: topology, optimize, consensus, sweep, selfcheck.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wsnest/error.hpp"
#include "wsnest/experiment.hpp"
#include "wsnest/io.hpp"
#include "wsnest/rng.hpp"
#include "wsnest/selfcheck.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::optional<std::size_t> trials;
    std::optional<std::size_t> n;
    std::optional<std::string> constraint;
    std::optional<double> rho;
    std::optional<double> xi;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config, "JSON experiment config")->check(CLI::ExistingFile);
    cmd->add_option("--seed", opts.seed, "master seed");
    cmd->add_option("--out-dir", opts.out_dir, "output directory");
    cmd->add_option("--trials", opts.trials, "Monte Carlo trials");
    cmd->add_option("-n,--nodes", opts.n, "network size");
    cmd->add_option("--constraint", opts.constraint, "gain domain")
        ->check(CLI::IsMember({"fixed-energy", "unimodular"}));
    cmd->add_option("--rho", opts.rho, "ADMM step constant");
    cmd->add_option("--xi", opts.xi, "optimizer outer stop threshold");
}

wsn::ExperimentConfig load_config(const CommonOptions& opts) {
    nlohmann::json j = nlohmann::json::object();
    if (!opts.config.empty()) {
        std::ifstream in(opts.config);
        std::stringstream text;
        text << in.rdbuf();
        j = wsn::io::parse(text.str());
    }
    if (opts.seed) j["master_seed"] = *opts.seed;
    if (opts.trials) j["trials"] = *opts.trials;
    if (opts.n) j["n"] = *opts.n;
    if (opts.constraint) j["constraint"] = *opts.constraint;
    if (opts.rho) j["admm"]["rho"] = *opts.rho;
    if (opts.xi) j["optimizer"]["xi"] = *opts.xi;
    return wsn::config_from_json(j);
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
}

int cmd_topology(const CommonOptions& opts) {
    const auto cfg = load_config(opts);
    const wsn::Scenario scenario = wsn::make_scenario(cfg, cfg.n, 0);
    const auto& model = scenario.model;
    const auto gains = wsn::GainVector::all_ones(cfg.n, cfg.domain);
    const auto plan = wsn::select_retainers(model.graph, wsn::local_information_values(model, gains));
    open_out(opts.out_dir, "graph.json") << wsn::io::dump(wsn::io::graph_to_json(model.graph));
    open_out(opts.out_dir, "model.json") << wsn::io::dump(wsn::io::model_to_json(model));
    open_out(opts.out_dir, "plan.json") << wsn::io::dump(wsn::io::plan_to_json(plan));
    open_out(opts.out_dir, "global_model.json")
        << wsn::io::dump(wsn::io::global_model_to_json(wsn::build_global_model(model, plan)));
    std::cout << "n=" << model.size() << " edges=" << model.graph.edges().size()
              << " discarded=" << plan.discarded << "\n";
    return 0;
}

int cmd_optimize(const CommonOptions& opts) {
    const auto cfg = load_config(opts);
    const wsn::Scenario scenario = wsn::make_scenario(cfg, cfg.n, 0);
    const wsn::GainDesign design = wsn::design_gains(scenario.model, cfg, cfg.reselect_rounds);
    for (std::size_t r = 0; r < design.traces.size(); ++r) {
        const std::string name = r == 0 ? "opt_trace.csv" : "opt_trace_round" + std::to_string(r) + ".csv";
        auto out = open_out(opts.out_dir, name);
        wsn::io::write_opt_trace_csv(out, design.traces[r]);
    }
    auto gains = open_out(opts.out_dir, "gains.csv");
    wsn::io::write_gains_csv(gains, design.gains);
    open_out(opts.out_dir, "plan.json") << wsn::io::dump(wsn::io::plan_to_json(design.plan));
    std::cout << "initial_variance=" << wsn::io::format_double(design.initial_variance)
              << " optimized_variance=" << wsn::io::format_double(design.variance)
              << " rounds=" << design.traces.size()
              << " converged=" << (design.traces.back().converged ? "yes" : "no") << "\n";
    return 0;
}

int cmd_consensus(const CommonOptions& opts) {
    const auto cfg = load_config(opts);
    const wsn::ConvergenceResult result = wsn::run_convergence(cfg);
    auto trace = open_out(opts.out_dir, "consensus_trace.csv");
    wsn::io::write_mle_trace_csv(trace, result.trace);
    auto ref = open_out(opts.out_dir, "reference.csv");
    ref << "centralized_re,centralized_im,variance,iterations\n"
        << wsn::io::format_double(result.centralized.real()) << ','
        << wsn::io::format_double(result.centralized.imag()) << ','
        << wsn::io::format_double(result.variance) << ',' << result.trace.iterations << '\n';
    std::cout << "centralized=" << wsn::io::format_double(result.centralized.real()) << "+"
              << wsn::io::format_double(result.centralized.imag()) << "j iterations="
              << result.trace.iterations << "\n";
    return 0;
}

int cmd_sweep(const CommonOptions& opts, std::vector<std::size_t> n_list) {
    const auto cfg = load_config(opts);
    if (n_list.empty()) n_list = cfg.n_list;
    auto out = open_out(opts.out_dir, "sweep.csv");
    wsn::write_sweep_header(out);
    std::size_t failures = 0;
    wsn::run_variance_sweep(cfg, n_list, [&](const wsn::SweepRow& row) {
        wsn::write_sweep_row(out, row);
        out.flush();
        failures += row.failures;
        if (row.failures > 0) std::cerr << "n=" << row.n << ": " << row.failures << " failed trials; first: "
                                        << row.first_error << "\n";
    });
    return failures == 0 ? 0 : 2;
}

int cmd_selfcheck(const CommonOptions& opts, std::size_t cases) {
    const auto cfg = load_config(opts);
    const wsn::SelfCheckReport report = wsn::run_selfcheck(cfg.master_seed, cases);
    for (const auto& p : report.properties) {
        std::cout << (p.passed() ? "PASS " : "FAIL ") << p.name << " (" << p.cases - p.failures << "/"
                  << p.cases << ")";
        if (!p.passed()) std::cout << " -- " << p.first_failure;
        std::cout << "\n";
    }
    if (auto failing = report.first_failing()) {
        std::cerr << "first failing property: " << *failing << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decentralized ML estimation and sensor-gain optimization for sensor networks"};
    app.require_subcommand(1);

    CommonOptions topology_opts, optimize_opts, consensus_opts, sweep_opts, selfcheck_opts;
    std::vector<std::size_t> n_list;
    std::size_t cases = 100;

    auto* topology = app.add_subcommand("topology", "generate a scenario and dump graph/model/plan");
    add_common(topology, topology_opts);
    auto* optimize = app.add_subcommand("optimize", "optimize sensor gains for one scenario");
    add_common(optimize, optimize_opts);
    auto* consensus = app.add_subcommand("consensus", "run decentralized MLE and write the trace");
    add_common(consensus, consensus_opts);
    auto* sweep = app.add_subcommand("sweep", "mean variance vs network size");
    add_common(sweep, sweep_opts);
    sweep->add_option("--n-list", n_list, "network sizes")->delimiter(',');
    auto* selfcheck = app.add_subcommand("selfcheck", "randomized invariant suite");
    add_common(selfcheck, selfcheck_opts);
    selfcheck->add_option("--cases", cases, "cases per property");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*topology) return cmd_topology(topology_opts);
        if (*optimize) return cmd_optimize(optimize_opts);
        if (*consensus) return cmd_consensus(consensus_opts);
        if (*sweep) return cmd_sweep(sweep_opts, n_list);
        if (*selfcheck) return cmd_selfcheck(selfcheck_opts, cases);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
