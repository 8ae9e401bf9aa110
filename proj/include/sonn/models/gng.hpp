#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "sonn/dataset.hpp"
#include "sonn/models/context.hpp"
#include "sonn/models/params.hpp"
#include "sonn/network.hpp"
#include "sonn/random.hpp"

namespace sonn {

namespace detail {

/// Flattened view of every sample, in storage order.
inline std::vector<const Vector*> flat_samples(const Dataset& data) {
    std::vector<const Vector*> flat;
    flat.reserve(data.sample_count());
    data.for_each_sample([&](const Vector& s) { flat.push_back(&s); });
    return flat;
}

/// Seeds `start_size` neurons on distinct random samples, fully connected.
template <class Context>
Network seed_growing_network(const Dataset& data, const GngParams& p, const Context& ctx, ModelKind tag, Rng& rng) {
    auto flat = flat_samples(data);
    if (flat.size() < p.start_size) {
        throw DatasetError("dataset has " + std::to_string(flat.size()) + " samples, fewer than start_size " +
                           std::to_string(p.start_size));
    }
    Network net(tag);
    for (std::size_t k = 0; k < p.start_size; ++k) {
        std::swap(flat[k], flat[k + uniform_index(rng, flat.size() - k)]);
        const Vector& w = *flat[k];
        net.add_neuron(w, std::vector<Vector>(ctx.depth(), w));
    }
    for (NeuronId a = 0; a < p.start_size; ++a) {
        for (NeuronId b = a + 1; b < p.start_size; ++b) net.refresh_edge(a, b);
    }
    return net;
}

template <class Score>
NeuronId argmax_error(const Network& net, Score&& eligible) {
    NeuronId best = 0;
    double best_e = -1.0;
    net.for_each_neuron([&](const Neuron& n) {
        if (eligible(n.id) && n.error > best_e) {
            best_e = n.error;
            best = n.id;
        }
    });
    return best;
}

/**
 * @brief Inserts a neuron halfway between the highest-error neuron q and its
 * highest-error topological neighbor f; returns the new id if one was added.
 */
inline std::optional<NeuronId> insert_between_max_error(Network& net, const GngParams& p) {
    const NeuronId q = argmax_error(net, [](NeuronId) { return true; });
    const auto nbrs = net.neighbors(q, EdgeFilter::only(EdgeKind::topological));
    if (nbrs.empty()) return std::nullopt;
    const NeuronId f = argmax_error(net, [&](NeuronId id) {
        return std::binary_search(nbrs.begin(), nbrs.end(), id);
    });
    const Neuron& nq = net.neuron(q);
    const Neuron& nf = net.neuron(f);
    Vector weight = 0.5 * (nq.weight + nf.weight);
    std::vector<Vector> contexts;
    for (std::size_t k = 0; k < nq.contexts.size(); ++k) contexts.push_back(0.5 * (nq.contexts[k] + nf.contexts[k]));
    const NeuronId r = net.add_neuron(std::move(weight), std::move(contexts));
    net.remove_edge(q, f, EdgeKind::topological);
    net.refresh_edge(q, r);
    net.refresh_edge(r, f);
    net.neuron(q).error *= p.delta;
    net.neuron(f).error *= p.delta;
    net.neuron(r).error = net.neuron(q).error;
    return r;
}

inline void decay_errors(Network& net, double zeta) {
    net.for_each_neuron([&](Neuron& n) { n.error *= zeta; });
}

/**
 * @brief Growing neural gas loop with a pluggable context policy.
 *
 * Per presentation: winner pair (skipping the last `blocked_steps`
 * winners), age the winner's edges, accumulate its matching score as
 * error, pull winner and topological neighbors towards the input, refresh
 * the winner/second edge, prune stale edges and isolated neurons. Every
 * `lambda` presentations a neuron is inserted; errors decay by `zeta`
 * after every presentation.
 */
template <class Context, class Observer>
Network train_growing(const Dataset& data, const GngParams& p, Context ctx, ModelKind tag, std::uint64_t seed,
                      Observer&& observer) {
    p.validate();
    validate_dataset(data);

    Rng rng(seed);
    Network net = seed_growing_network(data, p, ctx, tag, rng);
    std::deque<NeuronId> recent;
    std::vector<NeuronId> blocked;
    std::size_t step = 0;
    for (std::size_t run = 0; run < p.runs; ++run) {
        for (const auto ti : presentation_sequence(data, rng)) {
            ctx.reset();
            const auto& samples = data.trajectories[ti].samples;
            for (std::size_t si = 0; si < samples.size(); ++si) {
                const Vector& x = samples[si];
                blocked.assign(recent.begin(), recent.end());
                const auto pair =
                    best_matching_pair(net, [&](const Neuron& n) { return ctx.score(p.metric, x, n); }, blocked);

                net.age_edges(pair.first);
                Neuron& winner = net.neuron(pair.first);
                winner.error += pair.first_distance;
                winner.weight += p.eta_bmu * (x - winner.weight);
                ctx.adapt(winner, p.eta_bmu);
                net.for_each_neighbor(pair.first, EdgeFilter::only(EdgeKind::topological), [&](NeuronId id) {
                    Neuron& n = net.neuron(id);
                    n.weight += p.eta_n * (x - n.weight);
                    ctx.adapt(n, p.eta_n);
                });
                net.refresh_edge(pair.first, pair.second);
                net.prune_stale(p.epsilon_age);
                ctx.advance(net.neuron(pair.first));

                if (p.blocked_steps > 0) {
                    recent.push_back(pair.first);
                    while (recent.size() > p.blocked_steps) recent.pop_front();
                }
                ++step;
                if (step % p.lambda == 0 && net.size() < p.max_neurons) insert_between_max_error(net, p);
                decay_errors(net, p.zeta);
                observer(StepInfo{step - 1, ti, si, pair.first, pair.second}, std::as_const(net));
            }
        }
    }
    return net;
}

}  // namespace detail

template <class Observer = NoObserver>
Network train_gng(const Dataset& data, const GngParams& p, std::uint64_t seed, Observer&& observer = {}) {
    return detail::train_growing(data, p, NoContext{}, ModelKind::gng, seed, observer);
}

/// Merge GNG: one merge context per neuron; `ctx.depth` is ignored.
template <class Observer = NoObserver>
Network train_mgng(const Dataset& data, const GngParams& p, const ContextParams& ctx, std::uint64_t seed,
                   Observer&& observer = {}) {
    ctx.validate();
    return detail::train_growing(data, p, MergeContext(ctx.alpha, ctx.beta), ModelKind::mgng, seed, observer);
}

/// Gamma GNG with `ctx.depth` context descriptors.
template <class Observer = NoObserver>
Network train_gamma_gng(const Dataset& data, const GngParams& p, const ContextParams& ctx, std::uint64_t seed,
                        Observer&& observer = {}) {
    ctx.validate();
    if (ctx.depth < 1) throw ConfigError("gamma_gng: depth must be >= 1");
    return detail::train_growing(data, p, GammaContext(ctx.depth, ctx.alpha, ctx.beta), ModelKind::gamma_gng, seed,
                                 observer);
}

}  // namespace sonn
