#include "wsnest/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <string>

#include "wsnest/error.hpp"
#include "wsnest/rng.hpp"

namespace wsn {

namespace {

void check_node(const Graph& g, NodeId i) {
    if (i >= g.size()) {
        throw Error(ErrorCode::OutOfRange,
                    "node " + std::to_string(i) + " not in [0, " + std::to_string(g.size()) + ")");
    }
}

std::vector<Edge> sample_edges(std::size_t n, const GraphModel& model, Rng& rng) {
    std::vector<Edge> edges;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (const auto* geo = std::get_if<GeometricModel>(&model)) {
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = unit(rng);
            y[i] = unit(rng);
        }
        const double r2 = geo->radius * geo->radius;
        for (NodeId i = 0; i < n; ++i) {
            for (NodeId j = i + 1; j < n; ++j) {
                const double dx = x[i] - x[j];
                const double dy = y[i] - y[j];
                if (dx * dx + dy * dy < r2) edges.push_back({i, j});
            }
        }
    } else if (const auto* gnp = std::get_if<GnpModel>(&model)) {
        for (NodeId i = 0; i < n; ++i) {
            for (NodeId j = i + 1; j < n; ++j) {
                // p = 1 must give every edge, so compare strictly against the draw.
                if (unit(rng) < gnp->p) edges.push_back({i, j});
            }
        }
    } else {
        throw Error(ErrorCode::InvalidArgument, "random graph needs a geometric or gnp model");
    }
    return edges;
}

bool connected(std::size_t n, const std::vector<std::vector<NodeId>>& adjacency) {
    return n == 0 || bfs_order(n, adjacency, 0).size() == n;
}

}  // namespace

std::span<const NodeId> Graph::neighbors(NodeId i) const {
    check_node(*this, i);
    return adjacency_[i];
}

std::size_t Graph::degree(NodeId i) const {
    check_node(*this, i);
    return adjacency_[i].size();
}

bool Graph::adjacent(NodeId i, NodeId j) const {
    check_node(*this, i);
    check_node(*this, j);
    return std::binary_search(adjacency_[i].begin(), adjacency_[i].end(), j);
}

std::vector<NodeId> bfs_order(std::size_t n, std::span<const std::vector<NodeId>> adjacency,
                              NodeId start) {
    std::vector<NodeId> order;
    if (start >= n) return order;
    std::vector<bool> seen(n, false);
    std::queue<NodeId> frontier;
    frontier.push(start);
    seen[start] = true;
    while (!frontier.empty()) {
        const NodeId i = frontier.front();
        frontier.pop();
        order.push_back(i);
        for (NodeId j : adjacency[i]) {
            if (!seen[j]) {
                seen[j] = true;
                frontier.push(j);
            }
        }
    }
    return order;
}

Graph build_graph(std::size_t n, std::span<const Edge> edges) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "graph needs at least one node");

    Graph g;
    g.edges_.reserve(edges.size());
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n) {
            throw Error(ErrorCode::OutOfRange, "edge {" + std::to_string(e.u) + "," +
                                                   std::to_string(e.v) + "} outside [0, " +
                                                   std::to_string(n) + ")");
        }
        if (e.u == e.v) {
            throw Error(ErrorCode::SelfLoop, "self loop at node " + std::to_string(e.u));
        }
        g.edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
    }
    std::sort(g.edges_.begin(), g.edges_.end());
    if (auto dup = std::adjacent_find(g.edges_.begin(), g.edges_.end()); dup != g.edges_.end()) {
        throw Error(ErrorCode::DuplicateEdge,
                    "edge {" + std::to_string(dup->u) + "," + std::to_string(dup->v) + "}");
    }

    g.adjacency_.assign(n, {});
    for (const Edge& e : g.edges_) {
        g.adjacency_[e.u].push_back(e.v);
        g.adjacency_[e.v].push_back(e.u);
    }
    for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());

    if (!connected(n, g.adjacency_)) {
        throw Error(ErrorCode::Disconnected, "graph on " + std::to_string(n) +
                                                 " nodes has more than one component");
    }
    return g;
}

Graph with_provenance(Graph g, std::optional<std::uint64_t> seed, GraphModel model) {
    g.seed_ = seed;
    g.model_ = std::move(model);
    return g;
}

Graph random_connected_graph(std::size_t n, const GraphModel& model, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "graph needs at least one node");
    if (const auto* geo = std::get_if<GeometricModel>(&model)) {
        if (!(geo->radius > 0.0 && geo->radius <= std::sqrt(2.0))) {
            throw Error(ErrorCode::InvalidArgument, "geometric radius must lie in (0, sqrt(2)]");
        }
    } else if (const auto* gnp = std::get_if<GnpModel>(&model)) {
        if (!(gnp->p > 0.0 && gnp->p <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "gnp probability must lie in (0, 1]");
        }
    } else {
        throw Error(ErrorCode::InvalidArgument, "random graph needs a geometric or gnp model");
    }

    for (std::size_t attempt = 0; attempt < kMaxGraphResamples; ++attempt) {
        Rng rng(derive_seed(seed, attempt));
        const auto edges = sample_edges(n, model, rng);
        try {
            return with_provenance(build_graph(n, edges), seed, model);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Disconnected) throw;
        }
    }
    throw Error(ErrorCode::RetriesExhausted,
                "no connected draw after " + std::to_string(kMaxGraphResamples) + " attempts");
}

}  // namespace wsn
