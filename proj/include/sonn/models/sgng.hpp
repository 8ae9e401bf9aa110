#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "sonn/dataset.hpp"
#include "sonn/models/gng.hpp"
#include "sonn/models/params.hpp"
#include "sonn/network.hpp"

namespace sonn {

/// Trajectory portion summarised by its extreme points (older first).
struct Portion {
    Vector start;
    Vector end;
};

/**
 * @brief Longest portion ending at sample `t` that stays linear.
 *
 * The portion grows backwards one sample at a time while it holds at most
 * `max_portion` samples and every interior sample lies within
 * `linearity_tol * chord length` of the chord joining its extreme points.
 * Returns nullopt for the first sample and for zero-length portions.
 */
inline std::optional<Portion> trajectory_portion(const std::vector<Vector>& samples, std::size_t t,
                                                 const SgngParams& p) {
    std::size_t best = 0;
    for (std::size_t tau = 1; tau + 1 <= p.max_portion && tau <= t; ++tau) {
        const Vector& p0 = samples[t - tau];
        const Vector& p1 = samples[t];
        const Vector chord = p1 - p0;
        const double len = chord.norm();
        if (len == 0.0) break;
        const Vector unit = chord / len;
        bool linear = true;
        for (std::size_t k = t - tau + 1; k < t; ++k) {
            const Vector rel = samples[k] - p0;
            const double deviation = (rel - rel.dot(unit) * unit).norm();
            if (deviation > p.linearity_tol * len) {
                linear = false;
                break;
            }
        }
        if (!linear) break;
        best = tau;
    }
    if (best == 0) return std::nullopt;
    return Portion{samples[t - best], samples[t]};
}

/// |cos| of the angle between two directions; 0 when either is zero-length.
inline double abs_cosine(const Vector& u, const Vector& v) {
    const double denom = u.norm() * v.norm();
    if (denom == 0.0) return 0.0;
    return std::min(1.0, std::abs(u.dot(v)) / denom);
}

/// w_close * d_close + w_parallel * (1 - |cos|) between segment (wa, wb) and a portion.
inline double segment_score(const Vector& wa, const Vector& wb, const Portion& portion, const SgngParams& p) {
    const double d_close = p.growth.metric(0.5 * (portion.start + portion.end), 0.5 * (wa + wb));
    const double parallel = abs_cosine(wb - wa, portion.end - portion.start);
    return p.w_close * d_close + p.w_parallel * (1.0 - parallel);
}

struct SegmentMatch {
    NeuronId a = 0;
    NeuronId b = 0;
    double score = std::numeric_limits<double>::infinity();
};

struct BmlsPair {
    SegmentMatch first;
    std::optional<SegmentMatch> second;
};

/// Best and second-best matching linear segments over all topological edges.
inline BmlsPair best_matching_segments(const Network& net, const Portion& portion, const SgngParams& p) {
    BmlsPair out;
    bool have_first = false;
    net.for_each_neuron([&](const Neuron& na) {
        net.for_each_neighbor(na.id, EdgeFilter::only(EdgeKind::topological), [&](NeuronId b) {
            if (b <= na.id) return;
            const SegmentMatch m{na.id, b, segment_score(na.weight, net.neuron(b).weight, portion, p)};
            if (!have_first || m.score < out.first.score) {
                if (have_first) out.second = out.first;
                out.first = m;
                have_first = true;
            } else if (!out.second || m.score < out.second->score) {
                out.second = m;
            }
        });
    });
    if (!have_first) throw InsufficientNetworkError("segment matching on a network without segments");
    return out;
}

namespace detail {

/// Endpoint pair of two disjoint segments with the smallest weight distance.
inline std::pair<NeuronId, NeuronId> closest_endpoints(const Network& net, NeuronId s, NeuronId e,
                                                       const SegmentMatch& other, const DistanceMetric& m) {
    std::pair<NeuronId, NeuronId> best{s, other.a};
    double best_d = std::numeric_limits<double>::infinity();
    for (const NeuronId u : {s, e}) {
        for (const NeuronId v : {other.a, other.b}) {
            const double d = m.squared(net.neuron(u).weight, net.neuron(v).weight);
            if (d < best_d) {
                best_d = d;
                best = {u, v};
            }
        }
    }
    return best;
}

}  // namespace detail

/**
 * @brief Segment GNG.
 *
 * The matching unit is a segment (topological edge). For each sample a
 * linear portion is built; the best matching linear segment (BMLS) is
 * oriented towards the portion, its endpoints pulled to the portion's
 * extreme points (neighbors by eta_n), and a temporal edge joins the
 * previous BMLS end to the current BMLS start. The endpoints closest
 * between the first and second BMLS receive a topological edge. Aging,
 * pruning, insertion and error decay follow the GNG loop, counted in
 * processed (non-skipped) samples. Winner blocking does not apply.
 */
template <class Observer = NoObserver>
Network train_sgng(const Dataset& data, const SgngParams& p, std::uint64_t seed, Observer&& observer = {}) {
    p.validate();
    validate_dataset(data);
    const auto& g = p.growth;
    const auto& metric = g.metric;

    Rng rng(seed);
    Network net = detail::seed_growing_network(data, g, NoContext{}, ModelKind::sgng, rng);
    std::size_t step = 0;
    for (std::size_t run = 0; run < g.runs; ++run) {
        for (const auto ti : presentation_sequence(data, rng)) {
            std::optional<NeuronId> previous_end;
            const auto& samples = data.trajectories[ti].samples;
            for (std::size_t si = 0; si < samples.size(); ++si) {
                const auto portion = trajectory_portion(samples, si, p);
                if (!portion) continue;
                const auto match = best_matching_segments(net, *portion, p);

                NeuronId s = match.first.a, e = match.first.b;
                {
                    const Vector& wa = net.neuron(s).weight;
                    const Vector& wb = net.neuron(e).weight;
                    const double direct = metric.squared(wa, portion->start) + metric.squared(wb, portion->end);
                    const double swapped = metric.squared(wa, portion->end) + metric.squared(wb, portion->start);
                    if (swapped < direct) std::swap(s, e);
                }
                net.age_edges(s);
                net.age_edges(e);

                Neuron& ns = net.neuron(s);
                Neuron& ne = net.neuron(e);
                ns.error += metric.squared(ns.weight, portion->start);
                ne.error += metric.squared(ne.weight, portion->end);
                ns.weight += g.eta_bmu * (portion->start - ns.weight);
                ne.weight += g.eta_bmu * (portion->end - ne.weight);
                auto pull_neighbors = [&](NeuronId center, NeuronId partner, const Vector& target) {
                    net.for_each_neighbor(center, EdgeFilter::only(EdgeKind::topological), [&](NeuronId id) {
                        if (id == partner) return;
                        Neuron& n = net.neuron(id);
                        n.weight += g.eta_n * (target - n.weight);
                    });
                };
                pull_neighbors(s, e, portion->start);
                pull_neighbors(e, s, portion->end);

                net.refresh_edge(s, e);
                if (match.second) {
                    const auto& o = *match.second;
                    const bool shares = o.a == s || o.a == e || o.b == s || o.b == e;
                    if (!shares) {
                        const auto [u, v] = detail::closest_endpoints(net, s, e, o, metric);
                        net.refresh_edge(u, v);
                    }
                }
                if (previous_end && *previous_end != s && net.contains(*previous_end)) {
                    net.refresh_edge(*previous_end, s, EdgeKind::temporal);
                }
                net.prune_stale(g.epsilon_age);
                previous_end = e;

                ++step;
                if (step % g.lambda == 0 && net.size() < g.max_neurons) detail::insert_between_max_error(net, g);
                detail::decay_errors(net, g.zeta);
                observer(StepInfo{step - 1, ti, si, s, e}, std::as_const(net));
            }
        }
    }
    return net;
}

}  // namespace sonn
