#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sonn/reduction.hpp"
#include "test_support.hpp"

using namespace sonn;
using testing_support::vec;

namespace {

/// Over-threshold edges of `net`, as indices into the flattened edge list.
std::vector<std::size_t> long_edges(const Network& net, const oracle::PlainGraph& g, double threshold) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& [a, b] = g.edges[i];
        if (oracle::chebyshev_loop(net.neuron(a).weight, net.neuron(b).weight) > threshold) out.push_back(i);
    }
    return out;
}

}  // namespace

TEST(ReduceConnections, TriangleLosesLongEdge) {
    Network net;
    net.add_neuron(vec({0}));
    net.add_neuron(vec({5}));
    net.add_neuron(vec({15}));
    net.refresh_edge(0, 1);  // 5
    net.refresh_edge(1, 2);  // 10, not above the threshold
    net.refresh_edge(0, 2);  // 15
    const auto r = reduce_connections(net, 10.0);
    EXPECT_EQ(r.removed, 1u);
    EXPECT_EQ(net.edge_count(), 2u);
    EXPECT_FALSE(net.adjacent(0, 2));
    EXPECT_EQ(component_count(net), 1u);
}

TEST(ReduceConnections, BridgeIsKept) {
    Network net;
    net.add_neuron(vec({0}));
    net.add_neuron(vec({5}));
    net.add_neuron(vec({20}));
    net.refresh_edge(0, 1);
    net.refresh_edge(1, 2);  // 15-degree bridge
    net.age_edges(2);
    const auto r = reduce_connections(net, 10.0);
    EXPECT_EQ(r.removed, 0u);
    EXPECT_TRUE(net.adjacent(1, 2));
    EXPECT_EQ(net.edge_age(1, 2, EdgeKind::topological), 1);  // restored unchanged
}

TEST(ReduceConnections, LongestFirst) {
    // Cycle 0-1-2 with two over-threshold edges; only one can go, and it must
    // be the longer one.
    Network net;
    net.add_neuron(vec({0}));
    net.add_neuron(vec({12}));
    net.add_neuron(vec({20}));
    net.refresh_edge(0, 1);  // 12
    net.refresh_edge(1, 2);  // 8
    net.refresh_edge(0, 2);  // 20
    const auto r = reduce_connections(net, 10.0);
    ASSERT_EQ(r.removed_edges.size(), 1u);
    EXPECT_EQ(r.removed_edges[0].a, 0u);
    EXPECT_EQ(r.removed_edges[0].b, 2u);
    EXPECT_TRUE(net.adjacent(0, 1));
}

TEST(ReduceConnections, RejectsNonPositiveThreshold) {
    Network net;
    EXPECT_THROW(reduce_connections(net, 0.0), ConfigError);
}

TEST(ReduceConnections, MatchesBridgeOracle) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        auto net = oracle::random_network(rng, 40, 0.08, 6, 0, 30, true);
        const auto components_before = oracle::components_union_find(oracle::flatten(net));
        const auto before_edges = net.edges();
        const auto r = reduce_connections(net, 10.0);

        const auto g = oracle::flatten(net);
        EXPECT_EQ(oracle::components_union_find(g), components_before);
        const auto bridges = oracle::bridges(g);
        for (const auto i : long_edges(net, g, 10.0)) EXPECT_TRUE(bridges.count(i)) << "trial " << trial;
        for (const auto& e : r.removed_edges) {
            EXPECT_GT(chebyshev(net.neuron(e.a).weight, net.neuron(e.b).weight), 10.0);
            EXPECT_NE(std::find(before_edges.begin(), before_edges.end(), e), before_edges.end());
        }
        EXPECT_EQ(before_edges.size(), net.edge_count() + r.removed);
        EXPECT_EQ(reduce_connections(net, 10.0).removed, 0u);
    }
}
