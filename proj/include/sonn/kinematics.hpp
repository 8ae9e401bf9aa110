#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "sonn/errors.hpp"
#include "sonn/metric.hpp"

namespace sonn {

/// One standard Denavit-Hartenberg row. Lengths in meters, angles in radians.
struct DhRow {
    double a = 0.0;
    double alpha = 0.0;
    double d = 0.0;
    double theta_offset = 0.0;
};

/// 6-DOF serial arm described by standard DH parameters.
struct ArmModel {
    std::string name;
    std::array<DhRow, 6> rows{};

    /// Upper bound on the end-effector distance from the base origin.
    double reach_bound() const {
        double sum = 0.0;
        for (const auto& r : rows) sum += std::abs(r.a) + std::abs(r.d);
        return sum;
    }
};

struct Pose {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
};

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Homogeneous transform of one standard DH link: Rz(theta) Tz(d) Tx(a) Rx(alpha).
inline Eigen::Matrix4d dh_transform(const DhRow& row, double theta) {
    const double ct = std::cos(theta), st = std::sin(theta);
    const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
    Eigen::Matrix4d t;
    t << ct, -st * ca, st * sa, row.a * ct,
         st, ct * ca, -ct * sa, row.a * st,
         0.0, sa, ca, row.d,
         0.0, 0.0, 0.0, 1.0;
    return t;
}

/// Forward kinematics; joint angles in degrees.
inline Pose fk(const ArmModel& model, const JointConfig& q_deg) {
    Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
    for (std::size_t i = 0; i < model.rows.size(); ++i) {
        const auto& row = model.rows[i];
        t = t * dh_transform(row, deg2rad(q_deg[static_cast<Eigen::Index>(i)]) + row.theta_offset);
    }
    Pose pose;
    pose.position = t.block<3, 1>(0, 3);
    pose.rotation = t.block<3, 3>(0, 0);
    return pose;
}

inline Pose fk(const ArmModel& model, const Vector& q_deg) {
    if (q_deg.size() != kJointCount) {
        throw DimensionError("forward kinematics needs 6 joint angles, got " +
                             std::to_string(q_deg.size()));
    }
    return fk(model, JointConfig(q_deg));
}

/**
 * @brief Parse an arm model.
 *
 * Expected layout:
 * `{"name": "...", "dh": [{"a": m, "alpha": rad, "d": m, "theta_offset": rad}, ... x6]}`
 */
inline ArmModel arm_model_from_json(const nlohmann::json& j) {
    ArmModel model;
    model.name = j.value("name", std::string("arm"));
    if (!j.contains("dh") || !j["dh"].is_array() || j["dh"].size() != 6) {
        throw ConfigError("arm model: 'dh' must be an array of exactly 6 rows");
    }
    for (std::size_t i = 0; i < 6; ++i) {
        const auto& r = j["dh"][i];
        DhRow row;
        try {
            row.a = r.at("a").get<double>();
            row.alpha = r.at("alpha").get<double>();
            row.d = r.at("d").get<double>();
            row.theta_offset = r.value("theta_offset", 0.0);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("arm model: dh[" + std::to_string(i) + "]: " + e.what());
        }
        if (!std::isfinite(row.a) || !std::isfinite(row.alpha) || !std::isfinite(row.d) ||
            !std::isfinite(row.theta_offset)) {
            throw ConfigError("arm model: dh[" + std::to_string(i) + "] has a non-finite entry");
        }
        model.rows[i] = row;
    }
    return model;
}

inline nlohmann::json arm_model_to_json(const ArmModel& model) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : model.rows) {
        rows.push_back({{"a", r.a}, {"alpha", r.alpha}, {"d", r.d}, {"theta_offset", r.theta_offset}});
    }
    return {{"name", model.name}, {"dh", rows}};
}

inline ArmModel load_arm_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open arm model file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return arm_model_from_json(j);
}

}  // namespace sonn
