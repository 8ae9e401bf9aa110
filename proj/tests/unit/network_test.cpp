#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "sonn/network.hpp"
#include "test_support.hpp"

using namespace sonn;
using testing_support::vec;

namespace {

Network line_1d(std::initializer_list<double> positions) {
    Network net;
    for (const double p : positions) net.add_neuron(vec({p}));
    return net;
}

Network chain(std::size_t n) {
    Network net;
    for (std::size_t i = 0; i < n; ++i) net.add_neuron(vec({static_cast<double>(i)}));
    for (NeuronId i = 0; i + 1 < n; ++i) net.refresh_edge(i, i + 1);
    return net;
}

}  // namespace

TEST(Bmu, NearestTwo) {
    const auto net = line_1d({0, 10, 20});
    const auto r = bmu(net, vec({2}), DistanceMetric{});
    EXPECT_EQ(r.first, 0u);
    EXPECT_EQ(r.second, 1u);
    EXPECT_DOUBLE_EQ(r.first_distance, 2.0);
    EXPECT_DOUBLE_EQ(r.second_distance, 8.0);
}

TEST(Bmu, BlockingExcludesWinner) {
    const auto net = line_1d({0, 10, 20});
    const std::vector<NeuronId> blocked{0};
    const auto r = bmu(net, vec({2}), DistanceMetric{}, blocked);
    EXPECT_EQ(r.first, 1u);
    EXPECT_EQ(r.second, 2u);
}

TEST(Bmu, TiesGoToLowestId) {
    const auto net = line_1d({5, -5, 5, -5});
    const auto r = bmu(net, vec({0}), DistanceMetric{});
    EXPECT_EQ(r.first, 0u);
    EXPECT_EQ(r.second, 1u);
}

TEST(Bmu, FewerThanTwoUnblockedThrows) {
    const auto net = line_1d({0, 10});
    const std::vector<NeuronId> blocked{1};
    EXPECT_THROW(bmu(net, vec({0}), DistanceMetric{}, blocked), InsufficientNetworkError);
    EXPECT_THROW(bmu(line_1d({0}), vec({0}), DistanceMetric{}), InsufficientNetworkError);
    EXPECT_THROW(nearest_neuron(Network{}, vec({0})), InsufficientNetworkError);
}

TEST(Bmu, MatchesExhaustiveScan) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto net = oracle::random_network(rng, 100, 0.0, 6, -180, 180);
        const auto g = oracle::flatten(net);
        const auto x = oracle::random_vector(rng, 6, -180, 180);
        std::set<NeuronId> blocked_set;
        std::vector<NeuronId> blocked;
        for (int k = 0; k < trial % 4; ++k) {
            const auto id = static_cast<NeuronId>(rng() % 100);
            if (blocked_set.insert(id).second) blocked.push_back(id);
        }
        const auto r = bmu(net, x, DistanceMetric{MetricKind::euclid}, blocked);
        const auto o = oracle::bmu_scan(g, x, blocked_set);
        EXPECT_EQ(r.first, o.first);
        EXPECT_EQ(r.second, o.second);
        EXPECT_NE(r.first, r.second);
        EXPECT_FALSE(blocked_set.count(r.first));
        EXPECT_FALSE(blocked_set.count(r.second));
        const auto w = bmu(net, x, DistanceMetric{MetricKind::euclid_plus_cos}, blocked);
        const auto ow = oracle::bmu_scan(g, x, blocked_set, oracle::squared_wrapped);
        EXPECT_EQ(w.first, ow.first);
        EXPECT_EQ(w.second, ow.second);
    }
}

TEST(Edges, RefreshTwiceKeepsSingleEdgeAtAgeZero) {
    auto net = line_1d({0, 1});
    net.refresh_edge(0, 1);
    net.age_edges(0);
    net.refresh_edge(1, 0);
    EXPECT_EQ(net.edge_count(), 1u);
    EXPECT_EQ(net.edge_age(0, 1, EdgeKind::topological), 0);
}

TEST(Edges, KindsAreIndependent) {
    auto net = line_1d({0, 1});
    net.refresh_edge(0, 1, EdgeKind::topological);
    net.refresh_edge(0, 1, EdgeKind::temporal);
    EXPECT_EQ(net.edge_count(), 2u);
    EXPECT_EQ(net.edge_count(EdgeFilter::only(EdgeKind::temporal)), 1u);
    EXPECT_TRUE(net.adjacent(0, 1, EdgeFilter::only(EdgeKind::temporal)));
    EXPECT_FALSE(net.adjacent(0, 1, EdgeFilter::only(EdgeKind::lattice)));
    EXPECT_EQ(net.neighbors(0), std::vector<NeuronId>{1});
}

TEST(Edges, SelfEdgeRejected) {
    auto net = line_1d({0, 1});
    EXPECT_THROW(net.refresh_edge(1, 1), Error);
}

TEST(Edges, AgingTouchesOnlyIncidentEdges) {
    auto net = chain(4);
    net.age_edges(1);
    EXPECT_EQ(net.edge_age(0, 1, EdgeKind::topological), 1);
    EXPECT_EQ(net.edge_age(1, 2, EdgeKind::topological), 1);
    EXPECT_EQ(net.edge_age(2, 3, EdgeKind::topological), 0);
}

TEST(Edges, LatticeEdgesDoNotAgeByDefault) {
    auto net = line_1d({0, 1});
    net.refresh_edge(0, 1, EdgeKind::lattice);
    net.age_edges(0);
    EXPECT_EQ(net.edge_age(0, 1, EdgeKind::lattice), 0);
}

TEST(Prune, EdgeOlderThanMaxAgeRemoved) {
    auto net = chain(3);
    const int eps = 100;
    for (int i = 0; i < eps; ++i) net.age_edges(0);
    auto r = net.prune_stale(eps);
    EXPECT_EQ(r.edges_removed, 0u);  // age == eps survives
    net.age_edges(0);
    r = net.prune_stale(eps);
    EXPECT_EQ(r.edges_removed, 1u);
    EXPECT_FALSE(net.adjacent(0, 1));
}

TEST(Prune, IsolatedNeuronRemoved) {
    auto net = chain(3);
    net.age_edges(0);
    net.age_edges(0);
    const auto r = net.prune_stale(1);
    EXPECT_EQ(r.neurons_removed, 1u);
    EXPECT_FALSE(net.contains(0));
    EXPECT_TRUE(net.contains(1));
    EXPECT_EQ(net.size(), 2u);
}

TEST(Network, IdsNeverReused) {
    auto net = line_1d({0, 1, 2});
    net.remove_neuron(1);
    const auto id = net.add_neuron(vec({3}));
    EXPECT_EQ(id, 3u);
    EXPECT_EQ(net.ids(), (std::vector<NeuronId>{0, 2, 3}));
    EXPECT_THROW(net.neuron(1), Error);
}

TEST(Network, RemovingNeuronDropsItsEdges) {
    auto net = chain(3);
    net.remove_neuron(1);
    EXPECT_EQ(net.edge_count(), 0u);
    EXPECT_TRUE(net.neighbors(0).empty());
}

TEST(Network, ContextDimensionChecked) {
    Network net;
    EXPECT_THROW(net.add_neuron(vec({1, 2}), {vec({1})}), DimensionError);
}

TEST(Components, ChainIsOneComponent) {
    const auto net = chain(3);
    const auto comps = connected_components(net);
    ASSERT_EQ(comps.size(), 1u);
    EXPECT_EQ(comps[0], (std::vector<NeuronId>{0, 1, 2}));
}

TEST(Components, EdgelessNeuronsAreSingletons) {
    const auto net = line_1d({0, 1, 2});
    EXPECT_EQ(connected_components(net).size(), 3u);
    EXPECT_EQ(component_count(net), 3u);
}

TEST(Components, MatchesUnionFind) {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 100; ++trial) {
        auto net = oracle::random_network(rng, 60, 0.03, 3, 0, 1, true);
        if (trial % 3 == 0) net.remove_neuron(static_cast<NeuronId>(trial % 60));
        auto comps = connected_components(net);
        std::sort(comps.begin(), comps.end());
        EXPECT_EQ(comps, oracle::components_union_find(oracle::flatten(net)));
        std::set<NeuronId> seen;
        std::size_t total = 0;
        for (const auto& c : comps) {
            total += c.size();
            seen.insert(c.begin(), c.end());
        }
        EXPECT_EQ(total, net.size());
        EXPECT_EQ(seen.size(), net.size());
    }
}

TEST(Components, FilterRestrictsKinds) {
    auto net = line_1d({0, 1, 2});
    net.refresh_edge(0, 1, EdgeKind::topological);
    net.refresh_edge(1, 2, EdgeKind::temporal);
    EXPECT_EQ(component_count(net), 1u);
    EXPECT_EQ(component_count(net, EdgeFilter::only(EdgeKind::topological)), 2u);
}

TEST(HopDistance, ChainAndIdentity) {
    const auto net = chain(3);
    EXPECT_EQ(hop_distance(net, 0, 2), 2u);
    EXPECT_EQ(hop_distance(net, 2, 0), 2u);
    EXPECT_EQ(hop_distance(net, 1, 1), 0u);
    const auto apart = line_1d({0, 1});
    EXPECT_FALSE(hop_distance(apart, 0, 1).has_value());
}

TEST(HopDistance, MatchesDijkstraAndIsSymmetric) {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 100; ++trial) {
        const auto net = oracle::random_network(rng, 50, 0.05, 2, 0, 1, true);
        const auto g = oracle::flatten(net);
        const auto a = static_cast<NeuronId>(rng() % 50);
        const auto dist = oracle::dijkstra(g, a);
        for (NeuronId b = 0; b < 50; ++b) {
            const auto h = hop_distance(net, a, b);
            if (dist.at(b) == oracle::kInf) {
                EXPECT_FALSE(h.has_value());
            } else {
                ASSERT_TRUE(h.has_value());
                EXPECT_EQ(*h, dist.at(b));
                EXPECT_EQ(hop_distance(net, b, a), h);
            }
        }
    }
}

TEST(EdgeNames, RoundTrip) {
    for (const auto k : {EdgeKind::topological, EdgeKind::temporal, EdgeKind::lattice}) {
        EXPECT_EQ(edge_kind_from_string(to_string(k)), k);
    }
    for (const auto m : kAllModels) EXPECT_EQ(model_from_string(to_string(m)), m);
    EXPECT_FALSE(model_from_string("ng").has_value());
}
