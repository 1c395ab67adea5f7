#include <gtest/gtest.h>

#include "wsnest/error.hpp"
#include "wsnest/graph.hpp"

using namespace wsn;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no wsn::Error thrown";
    return ErrorCode::InvalidArgument;
}

std::vector<std::vector<NodeId>> adjacency_of(const Graph& g) {
    std::vector<std::vector<NodeId>> adj(g.size());
    for (NodeId i = 0; i < g.size(); ++i) adj[i].assign(g.neighbors(i).begin(), g.neighbors(i).end());
    return adj;
}

}  // namespace

TEST(BuildGraph, PathHasSortedNeighbors) {
    const std::vector<Edge> edges{{0, 1}, {2, 1}};
    const Graph g = build_graph(3, edges);
    ASSERT_EQ(g.size(), 3u);
    const auto s1 = g.neighbors(1);
    EXPECT_EQ(std::vector<NodeId>(s1.begin(), s1.end()), (std::vector<NodeId>{0, 2}));
    EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
}

TEST(BuildGraph, RejectsMalformedInput) {
    const std::vector<Edge> dup{{0, 1}, {0, 1}};
    EXPECT_EQ(code_of([&] { build_graph(2, dup); }), ErrorCode::DuplicateEdge);
    const std::vector<Edge> reversed_dup{{0, 1}, {1, 0}};
    EXPECT_EQ(code_of([&] { build_graph(2, reversed_dup); }), ErrorCode::DuplicateEdge);
    const std::vector<Edge> split{{0, 1}, {2, 3}};
    EXPECT_EQ(code_of([&] { build_graph(4, split); }), ErrorCode::Disconnected);
    const std::vector<Edge> loop{{0, 0}, {0, 1}};
    EXPECT_EQ(code_of([&] { build_graph(2, loop); }), ErrorCode::SelfLoop);
    const std::vector<Edge> outside{{0, 5}};
    EXPECT_EQ(code_of([&] { build_graph(2, outside); }), ErrorCode::OutOfRange);
}

TEST(Degree, ExcludesSelf) {
    const std::vector<Edge> path{{0, 1}, {1, 2}};
    const Graph g = build_graph(3, path);
    EXPECT_EQ(g.degree(1), 2u);
    EXPECT_EQ(g.degree(0), 1u);
    EXPECT_EQ(code_of([&] { g.degree(3); }), ErrorCode::OutOfRange);

    std::vector<Edge> complete;
    for (NodeId i = 0; i < 4; ++i)
        for (NodeId j = i + 1; j < 4; ++j) complete.push_back({i, j});
    const Graph k4 = build_graph(4, complete);
    for (NodeId i = 0; i < 4; ++i) EXPECT_EQ(k4.degree(i), 3u);
}

TEST(RandomGraph, SingleNode) {
    const Graph g = random_connected_graph(1, GeometricModel{0.5}, 7);
    EXPECT_EQ(g.size(), 1u);
    EXPECT_TRUE(g.edges().empty());
}

TEST(RandomGraph, FullProbabilityGivesEveryEdge) {
    const Graph g = random_connected_graph(2, GnpModel{1.0}, 3);
    EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}}));
}

TEST(RandomGraph, DeterministicPerSeed) {
    const Graph a = random_connected_graph(16, GeometricModel{0.5}, 42);
    const Graph b = random_connected_graph(16, GeometricModel{0.5}, 42);
    EXPECT_EQ(a.edges(), b.edges());
    EXPECT_EQ(a.seed(), std::optional<std::uint64_t>(42));
    EXPECT_FALSE(a.edges().empty());
}

TEST(RandomGraph, RetriesExhaustedOnHopelessRadius) {
    EXPECT_EQ(code_of([] { random_connected_graph(40, GeometricModel{0.01}, 1); }),
              ErrorCode::RetriesExhausted);
}

TEST(RandomGraph, RejectsBadParameters) {
    EXPECT_EQ(code_of([] { random_connected_graph(4, GeometricModel{0.0}, 1); }),
              ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { random_connected_graph(4, GeometricModel{1.5}, 1); }),
              ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { random_connected_graph(4, GnpModel{0.0}, 1); }), ErrorCode::InvalidArgument);
}

// Property: every generated graph is connected, symmetric and loop free.
TEST(RandomGraph, ConnectedAndSymmetricAcrossSeeds) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 1 + seed % 20;
        const GraphModel model = seed % 2 ? GraphModel{GnpModel{0.3}} : GraphModel{GeometricModel{0.5}};
        const Graph g = random_connected_graph(n, model, seed);
        EXPECT_EQ(bfs_order(n, adjacency_of(g), 0).size(), n) << "seed " << seed;
        for (NodeId i = 0; i < n; ++i) {
            for (NodeId j = 0; j < n; ++j) {
                if (i == j) continue;
                EXPECT_EQ(g.adjacent(i, j), g.adjacent(j, i));
            }
            for (NodeId j : g.neighbors(i)) EXPECT_NE(i, j);
        }
    }
}
