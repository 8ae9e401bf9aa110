#pragma once

#include <queue>
#include <string>
#include <vector>

#include "sonn/errors.hpp"
#include "sonn/kinematics.hpp"
#include "sonn/metric.hpp"
#include "sonn/network.hpp"

namespace sonn {

struct PathStats {
    std::size_t resolution = 0;     // neurons on the path
    double max_jump = 0.0;          // largest Chebyshev step between waypoints, degrees
    double cartesian_length = 0.0;  // end-effector polyline length, meters
};

/// Planned path: neuron ids plus waypoints (start, neuron weights..., goal).
struct PlanResult {
    std::vector<NeuronId> neuron_path;
    std::vector<Vector> waypoints;
    PathStats stats;
};

struct PlanOptions {
    EdgeFilter edges = EdgeFilter::all();
};

/// Wave index (hop count from `goal`) of every id; kUnreachable where the wave never arrives.
inline std::vector<std::size_t> wavefront(const Network& net, NeuronId goal, EdgeFilter edges = EdgeFilter::all()) {
    return hop_distances_from(net, goal, edges);
}

/// Largest Chebyshev step between consecutive waypoints.
inline double max_jump(const std::vector<Vector>& waypoints) {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) m = std::max(m, chebyshev(waypoints[i], waypoints[i + 1]));
    return m;
}

/**
 * @brief Wavefront planning between two configurations.
 *
 * Start and goal snap to their Euclidean-nearest neurons. A breadth-first
 * wave labels every neuron with its hop distance to the goal neuron; the
 * path then descends from the start neuron, always stepping to the
 * lowest-id neighbor whose wave index is one smaller. The result is a
 * minimum-hop path.
 */
inline PlanResult plan(const Network& net, const Vector& start, const Vector& goal, const PlanOptions& opt = {}) {
    if (net.empty()) throw InsufficientNetworkError("planning on an empty network");
    if (start.size() != net.dim() || goal.size() != net.dim()) {
        throw DimensionError("start/goal dimension does not match the network dimension " +
                             std::to_string(net.dim()));
    }
    const NeuronId from = nearest_neuron(net, start);
    const NeuronId to = nearest_neuron(net, goal);
    const auto wave = wavefront(net, to, opt.edges);
    if (wave[from] == kUnreachable) {
        const auto label = component_labels(net, opt.edges);
        const auto comps = connected_components(net, opt.edges);
        auto describe = [&](NeuronId id) {
            const auto& c = comps[static_cast<std::size_t>(label[id])];
            return "component " + std::to_string(label[id]) + " (" + std::to_string(c.size()) +
                   " neurons, lowest id " + std::to_string(c.front()) + ")";
        };
        throw NoPathError("no path: start neuron " + std::to_string(from) + " lies in " + describe(from) +
                          ", goal neuron " + std::to_string(to) + " lies in " + describe(to));
    }

    PlanResult result;
    NeuronId cur = from;
    result.neuron_path.push_back(cur);
    while (wave[cur] != 0) {
        NeuronId next = cur;
        net.for_each_neighbor(cur, opt.edges, [&](NeuronId v) {
            if (next == cur && wave[v] + 1 == wave[cur]) next = v;
        });
        cur = next;
        result.neuron_path.push_back(cur);
    }

    result.waypoints.reserve(result.neuron_path.size() + 2);
    result.waypoints.push_back(start);
    for (const auto id : result.neuron_path) result.waypoints.push_back(net.neuron(id).weight);
    result.waypoints.push_back(goal);
    result.stats.resolution = result.neuron_path.size();
    result.stats.max_jump = max_jump(result.waypoints);
    return result;
}

/// Resolution, largest joint jump and end-effector path length.
inline PathStats path_stats(const PlanResult& result, const ArmModel& arm) {
    PathStats s;
    s.resolution = result.neuron_path.size();
    s.max_jump = max_jump(result.waypoints);
    for (std::size_t i = 0; i + 1 < result.waypoints.size(); ++i) {
        s.cartesian_length += (fk(arm, result.waypoints[i + 1]).position - fk(arm, result.waypoints[i]).position).norm();
    }
    return s;
}

}  // namespace sonn
