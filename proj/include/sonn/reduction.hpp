#pragma once

#include <algorithm>
#include <queue>
#include <vector>

#include "sonn/errors.hpp"
#include "sonn/metric.hpp"
#include "sonn/network.hpp"

namespace sonn {

struct ReductionResult {
    std::size_t removed = 0;
    std::vector<Edge> removed_edges;  // in processing order
};

namespace detail {

/// Breadth-first reachability between two neurons over every edge kind.
inline bool wavefront_reaches(const Network& net, NeuronId from, NeuronId to) {
    std::vector<char> seen(net.id_bound(), 0);
    std::queue<NeuronId> frontier;
    seen[from] = 1;
    frontier.push(from);
    while (!frontier.empty()) {
        const auto u = frontier.front();
        frontier.pop();
        if (u == to) return true;
        net.for_each_neighbor(u, EdgeFilter::all(), [&](NeuronId v) {
            if (!seen[v]) {
                seen[v] = 1;
                frontier.push(v);
            }
        });
    }
    return false;
}

}  // namespace detail

/**
 * @brief Deletes over-long connections while keeping every component intact.
 *
 * Edges whose Chebyshev length exceeds `threshold` (degrees) are visited
 * longest first (ties by a, b, kind). Each is removed tentatively and kept
 * out only if its endpoints remain connected; otherwise it is restored
 * with its old age.
 */
inline ReductionResult reduce_connections(Network& net, double threshold) {
    if (!(threshold > 0.0)) throw ConfigError("reduction threshold must be > 0");
    struct Candidate {
        Edge edge;
        double length;
    };
    std::vector<Candidate> candidates;
    for (const auto& e : net.edges()) {
        const double len = chebyshev(net.neuron(e.a).weight, net.neuron(e.b).weight);
        if (len > threshold) candidates.push_back({e, len});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& x, const Candidate& y) { return x.length > y.length; });

    ReductionResult result;
    for (const auto& c : candidates) {
        net.remove_edge(c.edge.a, c.edge.b, c.edge.kind);
        if (detail::wavefront_reaches(net, c.edge.a, c.edge.b)) {
            result.removed_edges.push_back(c.edge);
        } else {
            net.set_edge(c.edge.a, c.edge.b, c.edge.kind, c.edge.age);
        }
    }
    result.removed = result.removed_edges.size();
    return result;
}

}  // namespace sonn
