#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>

#include "sonn/dataset.hpp"
#include "sonn/models/context.hpp"
#include "sonn/models/params.hpp"
#include "sonn/network.hpp"
#include "sonn/random.hpp"

namespace sonn {

namespace detail {

// Neighborhood weights below exp(-kCutoff^2 / 2) (about 1e-6) are skipped.
inline constexpr double kNeighborhoodCutoff = 5.2565;

/**
 * @brief Kohonen lattice training with a pluggable context policy.
 *
 * Weights (then contexts) start uniformly inside the data bounding box.
 * Width and rate decay as sigma0 exp(-t/T) and eta0 exp(-t/T), T being the
 * total number of presentations.
 */
template <class Context, class Observer>
Network train_lattice(const Dataset& data, const SomParams& p, Context ctx, ModelKind tag, std::uint64_t seed,
                      Observer&& observer) {
    p.validate();
    validate_dataset(data);

    Rng rng(seed);
    const auto [lo, hi] = data.bounding_box();
    Network net(tag);
    for (std::size_t r = 0; r < p.rows; ++r) {
        for (std::size_t c = 0; c < p.cols; ++c) {
            const auto id = net.add_neuron(random_in_box(lo, hi, rng));
            net.neuron(id).grid_pos = std::array<int, 2>{static_cast<int>(r), static_cast<int>(c)};
        }
    }
    for (std::size_t i = 0; i < net.id_bound(); ++i) {
        auto& n = net.neuron(static_cast<NeuronId>(i));
        for (std::size_t k = 0; k < ctx.depth(); ++k) n.contexts.push_back(random_in_box(lo, hi, rng));
    }
    auto id_at = [&](std::size_t r, std::size_t c) { return static_cast<NeuronId>(r * p.cols + c); };
    for (std::size_t r = 0; r < p.rows; ++r) {
        for (std::size_t c = 0; c < p.cols; ++c) {
            if (c + 1 < p.cols) net.refresh_edge(id_at(r, c), id_at(r, c + 1), EdgeKind::lattice);
            if (r + 1 < p.rows) net.refresh_edge(id_at(r, c), id_at(r + 1, c), EdgeKind::lattice);
        }
    }

    const double total = static_cast<double>(p.runs * data.sample_count());
    std::size_t step = 0;
    for (std::size_t run = 0; run < p.runs; ++run) {
        for (const auto ti : presentation_sequence(data, rng)) {
            ctx.reset();
            const auto& samples = data.trajectories[ti].samples;
            for (std::size_t si = 0; si < samples.size(); ++si) {
                const Vector& x = samples[si];
                const double decay = std::exp(-static_cast<double>(step) / total);
                const double sigma = p.sigma * decay;
                const double eta = p.eta * decay;

                const auto winner =
                    best_match(net, [&](const Neuron& n) { return ctx.score(p.metric, x, n); }).first;
                const auto [wr, wc] = *net.neuron(winner).grid_pos;
                const auto radius = static_cast<long>(std::floor(sigma * kNeighborhoodCutoff));
                const long r0 = std::max(0L, wr - radius), r1 = std::min<long>(static_cast<long>(p.rows) - 1, wr + radius);
                const long c0 = std::max(0L, wc - radius), c1 = std::min<long>(static_cast<long>(p.cols) - 1, wc + radius);
                for (long r = r0; r <= r1; ++r) {
                    for (long c = c0; c <= c1; ++c) {
                        const double d2 = static_cast<double>((r - wr) * (r - wr) + (c - wc) * (c - wc));
                        const double h = std::exp(-d2 / (2.0 * sigma * sigma));
                        if (h == 0.0) continue;
                        auto& n = net.neuron(id_at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
                        n.weight += (eta * h) * (x - n.weight);
                        ctx.adapt(n, eta * h);
                    }
                }
                ctx.advance(net.neuron(winner));
                observer(StepInfo{step, ti, si, winner, std::nullopt}, std::as_const(net));
                ++step;
            }
        }
    }
    return net;
}

}  // namespace detail

/// Plain Kohonen map; requires p.depth == 0.
template <class Observer = NoObserver>
Network train_som(const Dataset& data, const SomParams& p, std::uint64_t seed, Observer&& observer = {}) {
    if (p.depth != 0) throw ConfigError("som: depth must be 0 (use gamma_som for temporal context)");
    return detail::train_lattice(data, p, NoContext{}, ModelKind::som, seed, observer);
}

/// Merge SOM: one merge context per neuron. The depth field is ignored.
template <class Observer = NoObserver>
Network train_msom(const Dataset& data, const SomParams& p, std::uint64_t seed, Observer&& observer = {}) {
    p.validate();
    return detail::train_lattice(data, p, MergeContext(p.alpha, p.beta), ModelKind::msom, seed, observer);
}

/// Gamma SOM with p.depth >= 1 context descriptors.
template <class Observer = NoObserver>
Network train_gamma_som(const Dataset& data, const SomParams& p, std::uint64_t seed, Observer&& observer = {}) {
    if (p.depth < 1) throw ConfigError("gamma_som: depth must be >= 1");
    p.validate();
    return detail::train_lattice(data, p, GammaContext(p.depth, p.alpha, p.beta), ModelKind::gamma_som, seed,
                                 observer);
}

}  // namespace sonn
