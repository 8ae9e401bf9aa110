#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "sonn/errors.hpp"
#include "sonn/metric.hpp"
#include "sonn/network.hpp"

namespace sonn {

/// Growing-network constants; defaults are the reference parameter set.
struct GngParams {
    std::size_t start_size = 4;
    double eta_bmu = 0.06;       // pull of the winner towards the input
    double eta_n = 0.005;        // pull of the winner's neighbors
    std::size_t lambda = 20;     // presentations between insertions
    double zeta = 0.995;         // per-presentation error decay
    double delta = 0.3;          // error scaling of the split neurons on insertion
    int epsilon_age = 100;       // max edge age
    std::size_t max_neurons = 2000;
    std::size_t runs = 4;
    std::size_t blocked_steps = 0;
    DistanceMetric metric{MetricKind::euclid_plus_cos};

    void validate() const {
        auto rate = [](double v, const char* name) {
            if (!(v > 0.0 && v < 1.0)) throw ConfigError(std::string(name) + " must lie in (0, 1)");
        };
        rate(eta_bmu, "eta_bmu");
        rate(eta_n, "eta_n");
        rate(zeta, "zeta");
        rate(delta, "delta");
        if (lambda < 1) throw ConfigError("lambda must be >= 1");
        if (epsilon_age < 1) throw ConfigError("epsilon_age must be >= 1");
        if (start_size < 2) throw ConfigError("start_size must be >= 2");
        if (max_neurons < start_size) throw ConfigError("max_neurons must be >= start_size");
        if (runs < 1) throw ConfigError("runs must be >= 1");
        if (start_size < blocked_steps + 2) {
            throw ConfigError("start_size must exceed blocked_steps by at least 2");
        }
    }
};

/// Temporal context of the merge / gamma-memory models.
struct ContextParams {
    std::size_t depth = 1;  // number of context descriptors
    double alpha = 0.3;     // weight of the context term in the distance
    double beta = 0.7;      // blend between previous winner weight and context

    void validate() const {
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
        if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0, 1]");
    }
};

/// Lattice-map parameters; defaults are the reference SOM setting.
struct SomParams {
    std::size_t rows = 100;
    std::size_t cols = 100;
    double sigma = 5.0;  // initial neighborhood width, lattice units
    double eta = 0.2;    // initial learning rate
    double alpha = 0.3;
    double beta = 0.7;
    std::size_t runs = 4;
    std::size_t depth = 0;
    DistanceMetric metric{MetricKind::euclid};

    ContextParams context() const { return {depth, alpha, beta}; }

    void validate() const {
        if (rows < 1 || cols < 1) throw ConfigError("lattice dimensions must be >= 1");
        if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
        if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("eta must lie in (0, 1]");
        if (runs < 1) throw ConfigError("runs must be >= 1");
        context().validate();
    }
};

/// Segment GNG: growing-network constants plus trajectory-portion matching.
struct SgngParams {
    GngParams growth;
    std::size_t max_portion = 8;   // samples in the longest portion
    double linearity_tol = 0.1;    // max deviation from the chord, relative to chord length
    double w_close = 1.0;          // weight of the midpoint distance (degrees)
    double w_parallel = 100.0;     // weight of (1 - |cos|), degrees per unit

    void validate() const {
        growth.validate();
        if (max_portion < 2) throw ConfigError("max_portion must be >= 2");
        if (!(linearity_tol > 0.0)) throw ConfigError("linearity_tol must be > 0");
        if (w_close < 0.0 || w_parallel < 0.0 || (w_close == 0.0 && w_parallel == 0.0)) {
            throw ConfigError("w_close and w_parallel must be >= 0 and not both zero");
        }
    }
};

/// Per-presentation trace entry handed to training observers.
struct StepInfo {
    std::size_t step = 0;        // 0-based presentation index
    std::size_t trajectory = 0;  // index into Dataset::trajectories
    std::size_t sample = 0;      // index within the trajectory
    NeuronId winner = 0;         // BMU, or start neuron of the BMLS
    std::optional<NeuronId> second;
};

struct NoObserver {
    void operator()(const StepInfo&, const Network&) const {}
};

}  // namespace sonn
