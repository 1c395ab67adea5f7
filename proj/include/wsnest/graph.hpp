#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace wsn {

using NodeId = std::size_t;

/// Undirected edge, stored normalized with u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    auto operator<=>(const Edge&) const = default;
};

/// Nodes placed uniformly in the unit square, linked when closer than `radius`.
struct GeometricModel {
    double radius = 0.5;
    bool operator==(const GeometricModel&) const = default;
};

/// Erdos-Renyi G(n, p).
struct GnpModel {
    double p = 0.5;
    bool operator==(const GnpModel&) const = default;
};

/// monostate marks a graph given explicitly by its edge list.
using GraphModel = std::variant<std::monostate, GeometricModel, GnpModel>;

/// Undirected connected communication graph. Neighbor lists exclude the node
/// itself and are sorted ascending; immutable once built.
class Graph {
public:
    Graph() = default;

    std::size_t size() const noexcept { return adjacency_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::span<const NodeId> neighbors(NodeId i) const;
    std::size_t degree(NodeId i) const;
    bool adjacent(NodeId i, NodeId j) const;

    /// Generation provenance, carried through serialization.
    const std::optional<std::uint64_t>& seed() const noexcept { return seed_; }
    const GraphModel& model() const noexcept { return model_; }

    friend Graph build_graph(std::size_t n, std::span<const Edge> edges);
    friend Graph random_connected_graph(std::size_t n, const GraphModel& model,
                                        std::uint64_t seed);
    friend Graph with_provenance(Graph g, std::optional<std::uint64_t> seed, GraphModel model);

    bool operator==(const Graph& other) const {
        return edges_ == other.edges_ && adjacency_.size() == other.adjacency_.size();
    }

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> adjacency_;
    std::optional<std::uint64_t> seed_;
    GraphModel model_;
};

/// Validates and builds a connected graph. Edges may be given in either orientation.
/// Throws DuplicateEdge, SelfLoop, OutOfRange or Disconnected.
Graph build_graph(std::size_t n, std::span<const Edge> edges);

/// Same graph with provenance metadata attached.
Graph with_provenance(Graph g, std::optional<std::uint64_t> seed, GraphModel model);

/// Draws a connected graph, resampling with derived sub-seeds while the draw is
/// disconnected. Throws RetriesExhausted after kMaxGraphResamples attempts.
Graph random_connected_graph(std::size_t n, const GraphModel& model, std::uint64_t seed);

inline constexpr std::size_t kMaxGraphResamples = 1000;

/// Nodes reachable from `start` by breadth-first search, in visit order.
std::vector<NodeId> bfs_order(std::size_t n, std::span<const std::vector<NodeId>> adjacency,
                              NodeId start);

}  // namespace wsn
