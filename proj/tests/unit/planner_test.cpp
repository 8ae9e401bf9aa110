#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sonn/planner.hpp"
#include "test_support.hpp"

using namespace sonn;
using testing_support::vec;

namespace {

Network chain4() {
    Network net;
    for (int i = 0; i < 4; ++i) net.add_neuron(vec({10.0 * i, 0, 0, 0, 0, 0}));
    for (NeuronId i = 0; i < 3; ++i) net.refresh_edge(i, i + 1);
    return net;
}

ArmModel ur3() { return load_arm_model(std::filesystem::path(SONN_DATA_DIR) / "ur3.json"); }

}  // namespace

TEST(Plan, ChainGivesUniquePath) {
    const auto net = chain4();
    const auto r = plan(net, vec({-1, 0, 0, 0, 0, 0}), vec({31, 0, 0, 0, 0, 0}));
    EXPECT_EQ(r.neuron_path, (std::vector<NeuronId>{0, 1, 2, 3}));
    EXPECT_EQ(r.stats.resolution, 4u);
    ASSERT_EQ(r.waypoints.size(), 6u);
    EXPECT_EQ(r.waypoints.front(), vec({-1, 0, 0, 0, 0, 0}));
    EXPECT_EQ(r.waypoints.back(), vec({31, 0, 0, 0, 0, 0}));
    EXPECT_DOUBLE_EQ(r.stats.max_jump, 10.0);
}

TEST(Plan, SameSnapGivesSingleNeuron) {
    const auto net = chain4();
    const auto r = plan(net, vec({9, 0, 0, 0, 0, 0}), vec({12, 1, 0, 0, 0, 0}));
    EXPECT_EQ(r.neuron_path, std::vector<NeuronId>{1});
    EXPECT_EQ(r.stats.resolution, 1u);
    EXPECT_DOUBLE_EQ(r.stats.max_jump, 2.0);
}

TEST(Plan, TieBreaksToLowestId) {
    // Diamond 0-{1,2}-3: both middle neurons are one step from the goal.
    Network net;
    net.add_neuron(vec({0}));
    net.add_neuron(vec({5}));
    net.add_neuron(vec({5}));
    net.add_neuron(vec({10}));
    net.refresh_edge(0, 2);
    net.refresh_edge(0, 1);
    net.refresh_edge(2, 3);
    net.refresh_edge(1, 3);
    EXPECT_EQ(plan(net, vec({0}), vec({10})).neuron_path, (std::vector<NeuronId>{0, 1, 3}));
}

TEST(Plan, DisconnectedComponentsRaiseNoPath) {
    Network net;
    net.add_neuron(vec({0}));
    net.add_neuron(vec({1}));
    net.add_neuron(vec({50}));
    net.add_neuron(vec({51}));
    net.refresh_edge(0, 1);
    net.refresh_edge(2, 3);
    try {
        plan(net, vec({0}), vec({51}));
        FAIL() << "expected NoPathError";
    } catch (const NoPathError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("start neuron 0"), std::string::npos) << msg;
        EXPECT_NE(msg.find("goal neuron 3"), std::string::npos) << msg;
        EXPECT_NE(msg.find("lowest id 2"), std::string::npos) << msg;
    }
}

TEST(Plan, TopologicalOnlyIgnoresTemporalEdges) {
    Network net;
    net.add_neuron(vec({0}));
    net.add_neuron(vec({10}));
    net.refresh_edge(0, 1, EdgeKind::temporal);
    EXPECT_EQ(plan(net, vec({0}), vec({10})).neuron_path.size(), 2u);
    EXPECT_THROW(plan(net, vec({0}), vec({10}), {EdgeFilter::only(EdgeKind::topological)}), NoPathError);
}

TEST(Plan, RejectsEmptyNetworkAndWrongDimension) {
    EXPECT_THROW(plan(Network{}, vec({0}), vec({0})), InsufficientNetworkError);
    EXPECT_THROW(plan(chain4(), vec({0}), vec({0})), DimensionError);
}

TEST(Plan, HopLengthMatchesDijkstra) {
    std::mt19937_64 rng(23);
    const auto net = oracle::random_network(rng, 200, 0.015, 6, -180, 180, true);
    const auto g = oracle::flatten(net);
    int checked = 0;
    for (int q = 0; q < 50; ++q) {
        const auto s = oracle::random_vector(rng, 6, -180, 180);
        const auto t = oracle::random_vector(rng, 6, -180, 180);
        const auto from = nearest_neuron(net, s);
        const auto to = nearest_neuron(net, t);
        const auto dist = oracle::dijkstra(g, to);
        if (dist.at(from) == oracle::kInf) {
            EXPECT_THROW(plan(net, s, t), NoPathError);
            continue;
        }
        const auto r = plan(net, s, t);
        ++checked;
        EXPECT_EQ(r.neuron_path.size() - 1, dist.at(from));
        EXPECT_EQ(r.neuron_path.front(), from);
        EXPECT_EQ(r.neuron_path.back(), to);
        for (std::size_t i = 0; i + 1 < r.neuron_path.size(); ++i) {
            EXPECT_TRUE(net.adjacent(r.neuron_path[i], r.neuron_path[i + 1]));
        }
        EXPECT_EQ(r.waypoints.size(), r.neuron_path.size() + 2);
    }
    EXPECT_GT(checked, 25);
}

TEST(PathStats, SingleNeuronPath) {
    const auto net = chain4();
    const auto start = vec({12, 0, 0, 0, 0, 0});
    const auto goal = vec({7, 3, 0, 0, 0, 0});
    const auto r = plan(net, start, goal);
    const auto arm = ur3();
    const auto s = path_stats(r, arm);
    EXPECT_EQ(s.resolution, 1u);
    EXPECT_DOUBLE_EQ(s.max_jump, std::max(chebyshev(start, net.neuron(1).weight), chebyshev(net.neuron(1).weight, goal)));
    const double expected = (fk(arm, net.neuron(1).weight).position - fk(arm, start).position).norm() +
                            (fk(arm, goal).position - fk(arm, net.neuron(1).weight).position).norm();
    EXPECT_NEAR(s.cartesian_length, expected, 1e-12);
}

TEST(PathStats, SingleJointStep) {
    PlanResult r;
    r.neuron_path = {0};
    r.waypoints = {vec({0, 0, 0, 0, 0, 0}), vec({10, 0, 0, 0, 0, 0})};
    const auto s = path_stats(r, ur3());
    EXPECT_DOUBLE_EQ(s.max_jump, 10.0);
    EXPECT_GT(s.cartesian_length, 0.0);
}
