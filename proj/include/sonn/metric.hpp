#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "sonn/errors.hpp"

namespace sonn {

using Vector = Eigen::VectorXd;
using NeuronId = std::uint32_t;

/// Joint configuration of the 6-DOF arm, degrees.
using JointConfig = Eigen::Matrix<double, 6, 1>;
inline constexpr Eigen::Index kJointCount = 6;

enum class MetricKind { euclid, euclid_plus_cos };

inline std::string_view to_string(MetricKind kind) {
    return kind == MetricKind::euclid ? "euclid" : "euclid_plus_cos";
}

inline MetricKind metric_from_string(std::string_view name) {
    if (name == "euclid") return MetricKind::euclid;
    if (name == "euclid_plus_cos" || name == "euclid+cos") return MetricKind::euclid_plus_cos;
    throw ConfigError("unknown distance metric '" + std::string(name) + "'");
}

/// Shortest angular difference in degrees, in [0, 180].
inline double wrapped_angle_difference(double a, double b) {
    const double d = std::fmod(std::abs(a - b), 360.0);
    return d > 180.0 ? 360.0 - d : d;
}

/**
 * @brief Distance between joint-space vectors.
 *
 * `euclid` is the plain Euclidean norm. `euclid_plus_cos` treats every
 * coordinate as a periodic angle in degrees and takes the Euclidean norm
 * of the per-joint shortest angular differences.
 */
struct DistanceMetric {
    MetricKind kind = MetricKind::euclid;

    double squared(const Vector& a, const Vector& b) const {
        if (a.size() != b.size()) {
            throw DimensionError("distance between vectors of size " + std::to_string(a.size()) +
                                 " and " + std::to_string(b.size()));
        }
        if (kind == MetricKind::euclid) return (a - b).squaredNorm();
        double acc = 0.0;
        for (Eigen::Index j = 0; j < a.size(); ++j) {
            const double d = wrapped_angle_difference(a[j], b[j]);
            acc += d * d;
        }
        return acc;
    }

    double operator()(const Vector& a, const Vector& b) const { return std::sqrt(squared(a, b)); }

    friend bool operator==(const DistanceMetric&, const DistanceMetric&) = default;
};

/// Largest per-joint absolute difference.
inline double chebyshev(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw DimensionError("chebyshev distance between vectors of size " +
                             std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace sonn
