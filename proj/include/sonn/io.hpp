#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sonn/dataset.hpp"
#include "sonn/errors.hpp"
#include "sonn/metrics.hpp"
#include "sonn/network.hpp"
#include "sonn/planner.hpp"

namespace sonn {

/// Config hash and seed stamped into every output file.
struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;
};

inline nlohmann::json to_json(const Provenance& p) { return {{"config_hash", p.config_hash}, {"seed", p.seed}}; }

/// `# config_hash=... seed=...` comment line for CSV outputs.
inline void write_provenance_comment(std::ostream& out, const std::optional<Provenance>& p) {
    if (p) out << "# config_hash=" << p->config_hash << " seed=" << p->seed << '\n';
}

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline Vector vector_from_json(const nlohmann::json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

/**
 * @brief Graph export.
 *
 * `{"model", "neurons": [{"id", "weight", "error", "grid_pos"?, "contexts"?}],
 *   "edges": [{"a", "b", "age", "kind"}], "provenance"?}`
 */
inline nlohmann::json network_to_json(const Network& net, const std::optional<Provenance>& prov = std::nullopt) {
    nlohmann::json neurons = nlohmann::json::array();
    net.for_each_neuron([&](const Neuron& n) {
        nlohmann::json jn{{"id", n.id}, {"weight", to_std(n.weight)}, {"error", n.error}};
        if (n.grid_pos) jn["grid_pos"] = {(*n.grid_pos)[0], (*n.grid_pos)[1]};
        if (!n.contexts.empty()) {
            nlohmann::json ctx = nlohmann::json::array();
            for (const auto& c : n.contexts) ctx.push_back(to_std(c));
            jn["contexts"] = ctx;
        }
        neurons.push_back(std::move(jn));
    });
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : net.edges()) {
        edges.push_back({{"a", e.a}, {"b", e.b}, {"age", e.age}, {"kind", to_string(e.kind)}});
    }
    nlohmann::json j{{"model", to_string(net.model())}, {"neurons", neurons}, {"edges", edges}};
    if (prov) j["provenance"] = to_json(*prov);
    return j;
}

inline Network network_from_json(const nlohmann::json& j) {
    try {
        const auto model = model_from_string(j.at("model").get<std::string>());
        if (!model) throw ParseError("unknown model tag '" + j.at("model").get<std::string>() + "'");
        Network net(*model);
        NeuronId last = 0;
        bool first = true;
        for (const auto& jn : j.at("neurons")) {
            Neuron n;
            n.id = jn.at("id").get<NeuronId>();
            if (!first && n.id <= last) throw ParseError("neuron ids must be strictly increasing");
            first = false;
            last = n.id;
            n.weight = vector_from_json(jn.at("weight"));
            n.error = jn.value("error", 0.0);
            if (jn.contains("grid_pos")) {
                n.grid_pos = std::array<int, 2>{jn["grid_pos"][0].get<int>(), jn["grid_pos"][1].get<int>()};
            }
            if (jn.contains("contexts")) {
                for (const auto& c : jn["contexts"]) n.contexts.push_back(vector_from_json(c));
            }
            net.insert_neuron(std::move(n));
        }
        for (const auto& je : j.at("edges")) {
            const auto a = je.at("a").get<NeuronId>();
            const auto b = je.at("b").get<NeuronId>();
            if (!net.contains(a) || !net.contains(b)) {
                throw ParseError("edge " + std::to_string(a) + "-" + std::to_string(b) + " references a missing neuron");
            }
            net.set_edge(a, b, edge_kind_from_string(je.at("kind").get<std::string>()), je.at("age").get<int>());
        }
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("network JSON: ") + e.what());
    }
}

inline nlohmann::json plan_to_json(const PlanResult& plan, const std::optional<Provenance>& prov = std::nullopt) {
    nlohmann::json waypoints = nlohmann::json::array();
    for (const auto& w : plan.waypoints) waypoints.push_back(to_std(w));
    nlohmann::json j{{"neuron_path", plan.neuron_path},
                     {"waypoints", waypoints},
                     {"stats",
                      {{"resolution", plan.stats.resolution},
                       {"max_jump", plan.stats.max_jump},
                       {"cartesian_length", plan.stats.cartesian_length}}}};
    if (prov) j["provenance"] = to_json(*prov);
    return j;
}

/// One `j1..jN` row per waypoint.
inline void write_waypoints_csv(std::ostream& out, const PlanResult& plan,
                                const std::optional<Provenance>& prov = std::nullopt) {
    write_provenance_comment(out, prov);
    const auto dim = plan.waypoints.empty() ? 0 : plan.waypoints.front().size();
    for (Eigen::Index j = 0; j < dim; ++j) out << (j ? "," : "") << 'j' << (j + 1);
    out << '\n';
    for (const auto& w : plan.waypoints) {
        for (Eigen::Index j = 0; j < w.size(); ++j) out << (j ? "," : "") << detail::format_double(w[j]);
        out << '\n';
    }
}

inline nlohmann::json metrics_to_json(const MetricsReport& r) {
    return {{"qe", r.qe},
            {"cm", r.cm},
            {"cm_unreachable_fraction", r.cm_unreachable_fraction},
            {"n_neurons", r.n_neurons},
            {"n_edges", r.n_edges},
            {"n_components", r.n_components},
            {"coverage_fraction", r.coverage_fraction}};
}

}  // namespace sonn
