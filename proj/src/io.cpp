#include "wsnest/io.hpp"

#include <array>
#include <charconv>

#include "wsnest/error.hpp"

namespace wsn::io {

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

namespace {

json graph_model_to_json(const GraphModel& model) {
    if (const auto* geo = std::get_if<GeometricModel>(&model)) {
        return {{"type", "geometric"}, {"radius", geo->radius}};
    }
    if (const auto* gnp = std::get_if<GnpModel>(&model)) {
        return {{"type", "gnp"}, {"p", gnp->p}};
    }
    return {{"type", "explicit"}};
}

GraphModel graph_model_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "geometric") return GeometricModel{j.at("radius").get<double>()};
    if (type == "gnp") return GnpModel{j.at("p").get<double>()};
    if (type == "explicit") return std::monostate{};
    throw Error(ErrorCode::Parse, "unknown graph model '" + type + "'");
}

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, e.what());
    }
}

}  // namespace

json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
    json seed = g.seed() ? json(*g.seed()) : json(nullptr);
    return {{"n", g.size()}, {"edges", edges}, {"seed", seed}, {"model", graph_model_to_json(g.model())}};
}

Graph graph_from_json(const json& j) {
    return guarded([&] {
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<NodeId>(), e.at(1).get<NodeId>()});
        std::optional<std::uint64_t> seed;
        if (j.contains("seed") && !j.at("seed").is_null()) seed = j.at("seed").get<std::uint64_t>();
        GraphModel model = j.contains("model") ? graph_model_from_json(j.at("model")) : GraphModel{};
        return with_provenance(build_graph(j.at("n").get<std::size_t>(), edges), seed, model);
    });
}

json model_to_json(const NetworkModel& model) {
    json channels = json::array();
    for (const auto& [link, h] : model.h.table()) {
        channels.push_back({link.first, link.second, h.real(), h.imag()});
    }
    return {{"sigma_v_sq", model.sigma_v_sq},
            {"sigma_n_sq", model.sigma_n_sq},
            {"theta", {model.theta.real(), model.theta.imag()}},
            {"noisy_self_link", model.noisy_self_link},
            {"channels", channels}};
}

NetworkModel model_from_json(const json& j, Graph graph) {
    return guarded([&] {
        NetworkModel model;
        model.graph = std::move(graph);
        std::map<Link, cd> table;
        for (const auto& row : j.at("channels")) {
            table[{row.at(0).get<NodeId>(), row.at(1).get<NodeId>()}] =
                cd{row.at(2).get<double>(), row.at(3).get<double>()};
        }
        model.h = ChannelMap(std::move(table));
        model.sigma_v_sq = j.at("sigma_v_sq").get<std::vector<double>>();
        model.sigma_n_sq = j.at("sigma_n_sq").get<double>();
        model.theta = {j.at("theta").at(0).get<double>(), j.at("theta").at(1).get<double>()};
        model.noisy_self_link = j.value("noisy_self_link", false);
        model.validate();
        return model;
    });
}

json plan_to_json(const SelectionPlan& plan) {
    json rows = json::array();
    for (NodeId k = 0; k < plan.rows_at.size(); ++k) {
        for (NodeId s : plan.rows_at[k]) rows.push_back({k, s});
    }
    return {{"retainer", plan.retainer}, {"retained", rows}, {"r", plan.discarded}};
}

json global_model_to_json(const GlobalModel& gm) {
    json row_map = json::array();
    json h = json::array();
    for (std::size_t r = 0; r < gm.rows.size(); ++r) {
        const auto [k, s] = gm.rows[r];
        row_map.push_back({r, k, s});
        const cd value = gm.H(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
        h.push_back({value.real(), value.imag()});
    }
    return {{"M", gm.M()},
            {"N", gm.N()},
            {"row_map", row_map},
            {"h", h},
            {"sigma", std::vector<double>(gm.sigma.data(), gm.sigma.data() + gm.sigma.size())},
            {"v", std::vector<double>(gm.v.data(), gm.v.data() + gm.v.size())}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse(const std::string& text) {
    return guarded([&] { return json::parse(text); });
}

void write_gains_csv(std::ostream& out, const GainVector& gains) {
    out << "i,re,im\n";
    for (Eigen::Index i = 0; i < gains.a.size(); ++i) {
        out << i << ',' << format_double(gains.a[i].real()) << ',' << format_double(gains.a[i].imag())
            << '\n';
    }
}

void write_opt_trace_csv(std::ostream& out, const OptTrace& trace) {
    out << "outer_iter,eta,variance,inner_iters_used\n";
    for (std::size_t k = 0; k < trace.eta.size(); ++k) {
        out << k << ',' << format_double(trace.eta[k]) << ',' << format_double(trace.variance[k]) << ','
            << trace.inner_iters[k] << '\n';
    }
}

void write_mle_trace_csv(std::ostream& out, const MleTrace& trace) {
    out << "iter,node,I_re,P_re,P_im,theta_hat_re,theta_hat_im,disagreement\n";
    for (std::size_t k = 0; k < trace.I.size(); ++k) {
        for (std::size_t i = 0; i < trace.I[k].size(); ++i) {
            out << k << ',' << i << ',' << format_double(trace.I[k][i]) << ','
                << format_double(trace.P[k][i].real()) << ',' << format_double(trace.P[k][i].imag())
                << ',';
            if (const auto& theta = trace.theta[k][i]) {
                out << format_double(theta->real()) << ',' << format_double(theta->imag()) << ','
                    << format_double(std::abs(*theta - trace.reference));
            } else {
                out << ",,";
            }
            out << '\n';
        }
    }
}

}  // namespace wsn::io
