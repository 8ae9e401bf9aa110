#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "sonn/dataset.hpp"
#include "sonn/errors.hpp"
#include "sonn/metric.hpp"
#include "sonn/network.hpp"
#include "sonn/random.hpp"

namespace sonn {

/// Mean distance from each sample to its nearest neuron weight.
inline double quantization_error(const Network& net, const Dataset& data, const DistanceMetric& metric) {
    if (net.empty()) throw InsufficientNetworkError("quantization error of an empty network");
    if (data.empty()) throw EmptyDatasetError("quantization error over an empty dataset");
    double sum = 0.0;
    data.for_each_sample([&](const Vector& x) {
        sum += std::sqrt(best_match(net, [&](const Neuron& n) { return metric.squared(x, n.weight); }).second);
    });
    return sum / static_cast<double>(data.sample_count());
}

/// Fraction of samples with a neuron within Chebyshev distance `radius`.
inline double coverage(const Network& net, const Dataset& data, double radius) {
    if (!(radius > 0.0)) throw ConfigError("coverage radius must be > 0");
    if (data.empty()) return 0.0;
    std::size_t covered = 0;
    data.for_each_sample([&](const Vector& x) {
        bool hit = false;
        net.for_each_neuron([&](const Neuron& n) {
            if (!hit && chebyshev(x, n.weight) <= radius) hit = true;
        });
        if (hit) ++covered;
    });
    return static_cast<double>(covered) / static_cast<double>(data.sample_count());
}

struct CMeasure {
    double value = 0.0;
    std::size_t pairs_used = 0;         // reachable pairs that entered the mean
    double unreachable_fraction = 0.0;  // of all evaluated pairs
};

namespace detail {

/// Accumulates weight-distance * hop-distance and hop-distance over pairs.
class CMeasureAccumulator {
public:
    void add(double weight_distance, std::size_t hops) {
        ++evaluated_;
        if (hops == kUnreachable) return;
        const double h = static_cast<double>(hops);
        product_ += weight_distance * h;
        hop_sum_ += h;
        ++reachable_;
    }

    CMeasure finish() const {
        if (reachable_ == 0) throw UndefinedMeasureError("C-measure: no reachable neuron pairs");
        CMeasure cm;
        cm.value = product_ / hop_sum_;  // mean(product) / mean(hops)
        cm.pairs_used = reachable_;
        cm.unreachable_fraction = static_cast<double>(evaluated_ - reachable_) / static_cast<double>(evaluated_);
        return cm;
    }

private:
    double product_ = 0.0;
    double hop_sum_ = 0.0;
    std::size_t reachable_ = 0;
    std::size_t evaluated_ = 0;
};

}  // namespace detail

/**
 * @brief Neighborhood-preservation score over every unordered neuron pair.
 *
 * CM = mean(d_w(i,j) * d_hop(i,j)) / mean(d_hop(i,j)) over reachable pairs,
 * with d_w the Euclidean weight distance. Larger values mean that
 * topologically distant neurons are also far apart in weight space.
 */
inline CMeasure c_measure_exhaustive(const Network& net, EdgeFilter filter = EdgeFilter::all()) {
    const auto ids = net.ids();
    if (ids.size() < 2) throw UndefinedMeasureError("C-measure needs at least 2 neurons");
    detail::CMeasureAccumulator acc;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto hops = hop_distances_from(net, ids[i], filter);
        const Vector& wi = net.neuron(ids[i]).weight;
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            acc.add((wi - net.neuron(ids[j]).weight).norm(), hops[ids[j]]);
        }
    }
    return acc.finish();
}

/// Seeded estimate of the C-measure from `sample_pairs` uniformly drawn ordered pairs (i != j).
inline CMeasure c_measure(const Network& net, std::size_t sample_pairs, std::uint64_t seed,
                          EdgeFilter filter = EdgeFilter::all()) {
    const auto ids = net.ids();
    if (ids.size() < 2) throw UndefinedMeasureError("C-measure needs at least 2 neurons");
    if (sample_pairs == 0) throw ConfigError("C-measure needs at least one sampled pair");
    Rng rng(seed);
    std::map<NeuronId, std::vector<NeuronId>> by_source;
    for (std::size_t k = 0; k < sample_pairs; ++k) {
        const std::size_t i = uniform_index(rng, ids.size());
        std::size_t j = uniform_index(rng, ids.size() - 1);
        if (j >= i) ++j;
        by_source[ids[i]].push_back(ids[j]);
    }
    detail::CMeasureAccumulator acc;
    for (const auto& [source, targets] : by_source) {
        const auto hops = hop_distances_from(net, source, filter);
        const Vector& ws = net.neuron(source).weight;
        for (const auto t : targets) acc.add((ws - net.neuron(t).weight).norm(), hops[t]);
    }
    return acc.finish();
}

struct MetricsOptions {
    std::size_t cm_pairs = 100000;
    std::uint64_t cm_seed = 0;
    double coverage_radius = 10.0;
    bool exhaustive_cm = false;
};

struct MetricsReport {
    double qe = 0.0;
    double cm = 0.0;
    double cm_unreachable_fraction = 0.0;
    std::size_t n_neurons = 0;
    std::size_t n_edges = 0;
    std::size_t n_components = 0;
    double coverage_fraction = 0.0;
};

inline MetricsReport evaluate(const Network& net, const Dataset& data, const DistanceMetric& metric,
                              const MetricsOptions& opt = {}) {
    MetricsReport r;
    r.qe = quantization_error(net, data, metric);
    const auto cm = opt.exhaustive_cm ? c_measure_exhaustive(net) : c_measure(net, opt.cm_pairs, opt.cm_seed);
    r.cm = cm.value;
    r.cm_unreachable_fraction = cm.unreachable_fraction;
    r.n_neurons = net.size();
    r.n_edges = net.edge_count();
    r.n_components = component_count(net);
    r.coverage_fraction = coverage(net, data, opt.coverage_radius);
    return r;
}

}  // namespace sonn
