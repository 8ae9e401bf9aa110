#pragma once

#include <cstddef>
#include <vector>

#include "sonn/metric.hpp"
#include "sonn/models/params.hpp"
#include "sonn/network.hpp"

/**
 * @file context.hpp
 * @brief Temporal-context policies shared by the lattice and growing trainers.
 *
 * A policy owns the global context descriptor(s) computed from the previous
 * winner and supplies the matching score. Every policy has the same shape:
 *
 *   score(metric, x, neuron)  squared-distance-like matching score
 *   adapt(neuron, rate)       move the neuron's contexts towards the descriptor
 *   advance(winner)           recompute the descriptor from the winner
 *   reset()                   forget history (trajectory boundary)
 *
 * Right after a reset there is no previous winner; the score then uses the
 * weight term alone and contexts are left untouched.
 */

namespace sonn {

struct NoContext {
    std::size_t depth() const { return 0; }
    void reset() {}
    double score(const DistanceMetric& m, const Vector& x, const Neuron& n) const { return m.squared(x, n.weight); }
    void adapt(Neuron&, double) const {}
    void advance(const Neuron&) {}
};

/// Single merge context: c(t) = (1 - beta) w_b + beta c_b of the previous winner b.
class MergeContext {
public:
    MergeContext(double alpha, double beta) : alpha_(alpha), beta_(beta) {}

    std::size_t depth() const { return 1; }
    void reset() { active_ = false; }

    double score(const DistanceMetric& m, const Vector& x, const Neuron& n) const {
        const double w = m.squared(x, n.weight);
        if (!active_) return w;
        return (1.0 - alpha_) * w + alpha_ * m.squared(descriptor_, n.contexts[0]);
    }

    void adapt(Neuron& n, double rate) const {
        if (!active_) return;
        n.contexts[0] += rate * (descriptor_ - n.contexts[0]);
    }

    void advance(const Neuron& winner) {
        descriptor_ = (1.0 - beta_) * winner.weight + beta_ * winner.contexts[0];
        active_ = true;
    }

    const Vector& descriptor() const { return descriptor_; }

private:
    double alpha_;
    double beta_;
    Vector descriptor_;
    bool active_ = false;
};

/**
 * @brief Gamma memory of depth K.
 *
 * Descriptors follow c_1 = (1 - beta) w_b + beta c_{1,b} and
 * c_k = (1 - beta) c_{k-1,b} + beta c_{k,b}; each level carries weight alpha / K.
 */
class GammaContext {
public:
    GammaContext(std::size_t depth, double alpha, double beta) : depth_(depth), alpha_(alpha), beta_(beta) {
        if (depth_ == 0) throw ConfigError("gamma memory depth must be >= 1");
    }

    std::size_t depth() const { return depth_; }
    void reset() { active_ = false; }

    double score(const DistanceMetric& m, const Vector& x, const Neuron& n) const {
        const double w = m.squared(x, n.weight);
        if (!active_) return w;
        double acc = 0.0;
        for (std::size_t k = 0; k < depth_; ++k) acc += m.squared(descriptors_[k], n.contexts[k]);
        return (1.0 - alpha_) * w + (alpha_ / static_cast<double>(depth_)) * acc;
    }

    void adapt(Neuron& n, double rate) const {
        if (!active_) return;
        for (std::size_t k = 0; k < depth_; ++k) n.contexts[k] += rate * (descriptors_[k] - n.contexts[k]);
    }

    void advance(const Neuron& winner) {
        descriptors_.resize(depth_);
        descriptors_[0] = (1.0 - beta_) * winner.weight + beta_ * winner.contexts[0];
        for (std::size_t k = 1; k < depth_; ++k) {
            descriptors_[k] = (1.0 - beta_) * winner.contexts[k - 1] + beta_ * winner.contexts[k];
        }
        active_ = true;
    }

    const std::vector<Vector>& descriptors() const { return descriptors_; }

private:
    std::size_t depth_;
    double alpha_;
    double beta_;
    std::vector<Vector> descriptors_;
    bool active_ = false;
};

}  // namespace sonn
