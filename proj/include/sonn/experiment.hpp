#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sonn/dataset.hpp"
#include "sonn/errors.hpp"
#include "sonn/io.hpp"
#include "sonn/kinematics.hpp"
#include "sonn/metrics.hpp"
#include "sonn/models.hpp"
#include "sonn/network.hpp"
#include "sonn/planner.hpp"
#include "sonn/reduction.hpp"

/**
 * @file experiment.hpp
 * @brief Config-driven experiment runner.
 *
 * One JSON file describes one experiment (or a grid of them):
 *
 * @code{.json}
 * {
 *   "id": "gng_r4",
 *   "seed": 1,
 *   "output_dir": "results",
 *   "dataset": {"synthetic": {"trajectories": 15, "samples": 50, "seed": 7}},
 *   "interpolation_rounds": 0,
 *   "model": {"type": "gng", "gng": {"runs": 4, "blocked_steps": 0}},
 *   "reduction": {"enabled": true, "threshold": 10.0},
 *   "metrics": {"cm_pairs": 100000, "coverage_radius": 10.0},
 *   "plans": [{"start": [0, 0, 0, 0, 0, 0], "goal": [30, 10, 0, 0, 0, 0]}],
 *   "random_plans": 5,
 *   "plot_joints": [0, 1, 2],
 *   "grid": {"model.gng.blocked_steps": [0, 2]}
 * }
 * @endcode
 *
 * Relative paths resolve against the directory of the config file.
 */

namespace sonn {

struct PlanQuery {
    Vector start;
    Vector goal;
};

struct DatasetSource {
    std::optional<std::filesystem::path> path;
    DatasetFormat format = DatasetFormat::csv;
    std::optional<SyntheticSpec> synthetic;
    std::uint64_t synthetic_seed = 0;
};

struct ExperimentConfig {
    std::string id;
    std::uint64_t seed = 0;
    DatasetSource dataset;
    int interpolation_rounds = 0;
    PresentationOrder presentation_order = PresentationOrder::trajectory_sequential;
    ModelSpec model;
    bool reduction_enabled = true;
    double reduction_threshold = 10.0;
    MetricsOptions metrics;
    std::vector<PlanQuery> plans;
    std::size_t random_plans = 0;
    EdgeFilter plan_edges = EdgeFilter::all();
    std::array<int, 3> plot_joints{0, 1, 2};
    std::filesystem::path arm_path;
    std::filesystem::path output_dir = "results";
    std::string config_hash;  // of the canonical config, excluding output_dir
};

// -- hashing -----------------------------------------------------------------

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

// -- config parsing ----------------------------------------------------------

namespace detail {

using nlohmann::json;

inline std::string join_path(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw ConfigError((path.empty() ? "config" : path) + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(join_path(path, key) + ": unknown field");
        }
    }
}

inline double read_number(const json& j, std::string_view key, const std::string& path, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j[std::string(key)];
    if (!v.is_number()) throw ConfigError(join_path(path, key) + ": expected a number");
    return v.get<double>();
}

inline std::uint64_t read_count(const json& j, std::string_view key, const std::string& path,
                                std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j[std::string(key)];
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError(join_path(path, key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

inline std::string read_string(const json& j, std::string_view key, const std::string& path,
                               const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j[std::string(key)];
    if (!v.is_string()) throw ConfigError(join_path(path, key) + ": expected a string");
    return v.get<std::string>();
}

inline bool read_bool(const json& j, std::string_view key, const std::string& path, bool fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j[std::string(key)];
    if (!v.is_boolean()) throw ConfigError(join_path(path, key) + ": expected true or false");
    return v.get<bool>();
}

/// A number (broadcast) or an array of `n` numbers.
inline Vector read_vector(const json& v, Eigen::Index n, const std::string& path) {
    if (v.is_number()) return Vector::Constant(n, v.get<double>());
    if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != n) {
        throw ConfigError(path + ": expected a number or an array of " + std::to_string(n) + " numbers");
    }
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& e = v[static_cast<std::size_t>(i)];
        if (!e.is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]: expected a number");
        out[i] = e.get<double>();
    }
    if (!out.allFinite()) throw ConfigError(path + ": non-finite value");
    return out;
}

inline DistanceMetric read_metric(const json& j, const std::string& path, DistanceMetric fallback) {
    if (!j.contains("metric")) return fallback;
    try {
        return DistanceMetric{metric_from_string(read_string(j, "metric", path, ""))};
    } catch (const ConfigError& e) {
        throw ConfigError(join_path(path, "metric") + ": " + e.what());
    }
}

inline GngParams read_gng(const json& j, const std::string& path) {
    check_keys(j, path, {"start_size", "eta_bmu", "eta_n", "lambda", "zeta", "delta", "epsilon_age", "max_neurons",
                         "runs", "blocked_steps", "metric"});
    GngParams p;
    p.start_size = read_count(j, "start_size", path, p.start_size);
    p.eta_bmu = read_number(j, "eta_bmu", path, p.eta_bmu);
    p.eta_n = read_number(j, "eta_n", path, p.eta_n);
    p.lambda = read_count(j, "lambda", path, p.lambda);
    p.zeta = read_number(j, "zeta", path, p.zeta);
    p.delta = read_number(j, "delta", path, p.delta);
    p.epsilon_age = static_cast<int>(read_count(j, "epsilon_age", path, static_cast<std::uint64_t>(p.epsilon_age)));
    p.max_neurons = read_count(j, "max_neurons", path, p.max_neurons);
    p.runs = read_count(j, "runs", path, p.runs);
    p.blocked_steps = read_count(j, "blocked_steps", path, p.blocked_steps);
    p.metric = read_metric(j, path, p.metric);
    return p;
}

inline ContextParams read_context(const json& j, const std::string& path) {
    check_keys(j, path, {"depth", "alpha", "beta"});
    ContextParams p;
    p.depth = read_count(j, "depth", path, p.depth);
    p.alpha = read_number(j, "alpha", path, p.alpha);
    p.beta = read_number(j, "beta", path, p.beta);
    return p;
}

inline SomParams read_som(const json& j, const std::string& path) {
    check_keys(j, path, {"rows", "cols", "sigma", "eta", "alpha", "beta", "runs", "depth", "metric"});
    SomParams p;
    p.rows = read_count(j, "rows", path, p.rows);
    p.cols = read_count(j, "cols", path, p.cols);
    p.sigma = read_number(j, "sigma", path, p.sigma);
    p.eta = read_number(j, "eta", path, p.eta);
    p.alpha = read_number(j, "alpha", path, p.alpha);
    p.beta = read_number(j, "beta", path, p.beta);
    p.runs = read_count(j, "runs", path, p.runs);
    p.depth = read_count(j, "depth", path, p.depth);
    p.metric = read_metric(j, path, p.metric);
    return p;
}

inline SgngParams read_sgng(const json& j, const std::string& path) {
    check_keys(j, path, {"max_portion", "linearity_tol", "w_close", "w_parallel"});
    SgngParams p;
    p.max_portion = read_count(j, "max_portion", path, p.max_portion);
    p.linearity_tol = read_number(j, "linearity_tol", path, p.linearity_tol);
    p.w_close = read_number(j, "w_close", path, p.w_close);
    p.w_parallel = read_number(j, "w_parallel", path, p.w_parallel);
    return p;
}

inline ModelSpec read_model(const json& j, const std::string& path) {
    check_keys(j, path, {"type", "gng", "context", "som", "sgng"});
    if (!j.contains("type")) throw ConfigError(join_path(path, "type") + ": missing");
    const auto type = read_string(j, "type", path, "");
    const auto kind = model_from_string(type);
    if (!kind) {
        throw ConfigError(join_path(path, "type") + ": unknown model '" + type +
                          "' (expected som, msom, gamma_som, gng, mgng, gamma_gng or sgng)");
    }
    ModelSpec spec;
    spec.kind = *kind;
    if (*kind == ModelKind::gamma_som) spec.som.depth = 2;
    if (*kind == ModelKind::msom) spec.som.depth = 1;
    if (j.contains("gng")) spec.gng = read_gng(j["gng"], join_path(path, "gng"));
    if (j.contains("context")) spec.context = read_context(j["context"], join_path(path, "context"));
    if (j.contains("som")) {
        const auto depth = spec.som.depth;
        spec.som = read_som(j["som"], join_path(path, "som"));
        if (!j["som"].contains("depth")) spec.som.depth = depth;
    }
    if (j.contains("sgng")) spec.sgng = read_sgng(j["sgng"], join_path(path, "sgng"));
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return spec;
}

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

inline DatasetSource read_dataset_source(const json& j, const std::string& path, const std::filesystem::path& base) {
    check_keys(j, path, {"path", "format", "synthetic"});
    DatasetSource src;
    if (j.contains("path") == j.contains("synthetic")) {
        throw ConfigError(path + ": give exactly one of 'path' or 'synthetic'");
    }
    if (j.contains("path")) {
        src.path = resolve(base, read_string(j, "path", path, ""));
        try {
            src.format = j.contains("format") ? dataset_format_from_string(read_string(j, "format", path, ""))
                                              : dataset_format_for(*src.path);
        } catch (const ConfigError& e) {
            throw ConfigError(join_path(path, "format") + ": " + e.what());
        }
        return src;
    }
    const auto& s = j["synthetic"];
    const auto spath = join_path(path, "synthetic");
    check_keys(s, spath, {"trajectories", "samples", "lower", "upper", "bend", "seed", "table_grid"});
    SyntheticSpec spec;
    spec.trajectories = read_count(s, "trajectories", spath, spec.trajectories);
    spec.samples = read_count(s, "samples", spath, spec.samples);
    if (s.contains("lower")) spec.lower = read_vector(s["lower"], kJointCount, join_path(spath, "lower"));
    if (s.contains("upper")) spec.upper = read_vector(s["upper"], kJointCount, join_path(spath, "upper"));
    spec.bend = read_number(s, "bend", spath, spec.bend);
    if (spec.trajectories == 0) throw ConfigError(join_path(spath, "trajectories") + ": must be positive");
    if (spec.samples < 2) throw ConfigError(join_path(spath, "samples") + ": must be at least 2");
    if (!s.contains("seed")) throw ConfigError(join_path(spath, "seed") + ": missing (seeds must be explicit)");
    src.synthetic_seed = read_count(s, "seed", spath, 0);
    if (s.contains("table_grid")) {
        const auto& g = s["table_grid"];
        const auto gpath = join_path(spath, "table_grid");
        check_keys(g, gpath, {"rows", "cols", "spacing", "height", "origin", "candidates"});
        TableGrid grid;
        grid.rows = read_count(g, "rows", gpath, grid.rows);
        grid.cols = read_count(g, "cols", gpath, grid.cols);
        grid.spacing = read_number(g, "spacing", gpath, grid.spacing);
        grid.height = read_number(g, "height", gpath, grid.height);
        grid.candidates = read_count(g, "candidates", gpath, grid.candidates);
        if (g.contains("origin")) {
            const Vector o = read_vector(g["origin"], 3, join_path(gpath, "origin"));
            grid.origin = Eigen::Vector3d(o[0], o[1], o[2]);
        }
        spec.table = grid;  // arm filled in after the arm model is known
    }
    src.synthetic = spec;
    return src;
}

inline std::vector<PlanQuery> read_plans(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path + ": expected an array");
    std::vector<PlanQuery> plans;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto p = path + "[" + std::to_string(i) + "]";
        check_keys(j[i], p, {"start", "goal"});
        if (!j[i].contains("start") || !j[i].contains("goal")) throw ConfigError(p + ": needs 'start' and 'goal'");
        plans.push_back({read_vector(j[i]["start"], kJointCount, p + ".start"),
                         read_vector(j[i]["goal"], kJointCount, p + ".goal")});
    }
    return plans;
}

}  // namespace detail

/**
 * @brief Expands a `grid` block into one config per cell.
 *
 * Keys are dotted field paths, values arrays of settings. Each cell gets
 * its settings applied and an id suffix `__<leaf>=<value>` per axis.
 */
inline std::vector<nlohmann::json> expand_grid(const nlohmann::json& config) {
    if (!config.is_object()) throw ConfigError("config: expected an object");
    if (!config.contains("grid")) return {config};
    const auto& grid = config["grid"];
    if (!grid.is_object() || grid.empty()) throw ConfigError("grid: expected a non-empty object");
    nlohmann::json base = config;
    base.erase("grid");
    std::vector<nlohmann::json> cells{base};
    for (const auto& [key, values] : grid.items()) {
        if (!values.is_array() || values.empty()) throw ConfigError("grid." + key + ": expected a non-empty array");
        std::string pointer;
        std::string leaf = key;
        std::stringstream parts(key);
        for (std::string part; std::getline(parts, part, '.');) {
            if (part.empty()) throw ConfigError("grid." + key + ": malformed field path");
            pointer += "/" + part;
            leaf = part;
        }
        std::vector<nlohmann::json> next;
        for (const auto& cell : cells) {
            for (const auto& v : values) {
                nlohmann::json c = cell;
                c[nlohmann::json::json_pointer(pointer)] = v;
                c["id"] = c.value("id", std::string("experiment")) + "__" + leaf + "=" +
                          (v.is_string() ? v.get<std::string>() : v.dump());
                next.push_back(std::move(c));
            }
        }
        cells = std::move(next);
    }
    return cells;
}

/// Parses one (grid-free) experiment. `base_dir` resolves relative paths.
inline ExperimentConfig parse_experiment(const nlohmann::json& j, const std::filesystem::path& base_dir = {},
                                         const std::filesystem::path& default_arm = {}) {
    using namespace detail;
    check_keys(j, "", {"id", "seed", "output_dir", "dataset", "interpolation_rounds", "presentation_order", "model",
                       "reduction", "metrics", "plans", "random_plans", "planner", "plot_joints", "arm"});
    ExperimentConfig c;
    c.id = read_string(j, "id", "", "");
    if (c.id.empty()) throw ConfigError("id: missing or empty");
    if (c.id.find_first_of("/\\") != std::string::npos) throw ConfigError("id: must not contain path separators");
    if (!j.contains("seed")) throw ConfigError("seed: missing (seeds must be explicit)");
    c.seed = read_count(j, "seed", "", 0);
    c.output_dir = resolve(base_dir, read_string(j, "output_dir", "", "results"));
    if (!j.contains("dataset")) throw ConfigError("dataset: missing");
    c.dataset = read_dataset_source(j["dataset"], "dataset", base_dir);
    c.interpolation_rounds = static_cast<int>(read_count(j, "interpolation_rounds", "", 0));
    try {
        c.presentation_order =
            presentation_order_from_string(read_string(j, "presentation_order", "", "trajectory-sequential"));
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("presentation_order: ") + e.what());
    }
    if (!j.contains("model")) throw ConfigError("model: missing");
    c.model = read_model(j["model"], "model");
    if (j.contains("reduction")) {
        check_keys(j["reduction"], "reduction", {"enabled", "threshold"});
        c.reduction_enabled = read_bool(j["reduction"], "enabled", "reduction", true);
        c.reduction_threshold = read_number(j["reduction"], "threshold", "reduction", 10.0);
        if (!(c.reduction_threshold > 0.0)) throw ConfigError("reduction.threshold: must be > 0");
    }
    if (j.contains("metrics")) {
        check_keys(j["metrics"], "metrics", {"cm_pairs", "coverage_radius", "exhaustive_cm"});
        c.metrics.cm_pairs = read_count(j["metrics"], "cm_pairs", "metrics", c.metrics.cm_pairs);
        c.metrics.coverage_radius = read_number(j["metrics"], "coverage_radius", "metrics", 10.0);
        c.metrics.exhaustive_cm = read_bool(j["metrics"], "exhaustive_cm", "metrics", false);
        if (c.metrics.cm_pairs == 0) throw ConfigError("metrics.cm_pairs: must be positive");
        if (!(c.metrics.coverage_radius > 0.0)) throw ConfigError("metrics.coverage_radius: must be > 0");
    }
    c.metrics.cm_seed = c.seed;
    if (j.contains("plans")) c.plans = read_plans(j["plans"], "plans");
    c.random_plans = read_count(j, "random_plans", "", 0);
    if (j.contains("planner")) {
        check_keys(j["planner"], "planner", {"edges"});
        const auto edges = read_string(j["planner"], "edges", "planner", "all");
        if (edges == "all") {
            c.plan_edges = EdgeFilter::all();
        } else if (edges == "topological") {
            c.plan_edges = EdgeFilter::only(EdgeKind::topological);
        } else {
            throw ConfigError("planner.edges: expected 'all' or 'topological'");
        }
    }
    if (j.contains("plot_joints")) {
        const auto& pj = j["plot_joints"];
        if (!pj.is_array() || pj.size() != 3) throw ConfigError("plot_joints: expected 3 joint indices");
        for (std::size_t i = 0; i < 3; ++i) {
            if (!pj[i].is_number_integer()) throw ConfigError("plot_joints[" + std::to_string(i) + "]: expected an integer");
            c.plot_joints[i] = pj[i].get<int>();
            if (c.plot_joints[i] < 0 || c.plot_joints[i] >= kJointCount) {
                throw ConfigError("plot_joints[" + std::to_string(i) + "]: out of range 0..5");
            }
        }
        if (c.plot_joints[0] == c.plot_joints[1] || c.plot_joints[0] == c.plot_joints[2] ||
            c.plot_joints[1] == c.plot_joints[2]) {
            throw ConfigError("plot_joints: indices must be distinct");
        }
    }
    c.arm_path = j.contains("arm") ? resolve(base_dir, read_string(j, "arm", "", "")) : default_arm;

    nlohmann::json hashed = j;
    hashed.erase("output_dir");
    c.config_hash = fnv1a_hex(hashed.dump());
    return c;
}

/// Reads a config file and returns one experiment per grid cell.
inline std::vector<ExperimentConfig> load_experiments(const std::filesystem::path& file,
                                                      const std::filesystem::path& default_arm = {}) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
    std::vector<ExperimentConfig> out;
    for (const auto& cell : expand_grid(j)) out.push_back(parse_experiment(cell, file.parent_path(), default_arm));
    return out;
}

// -- running -----------------------------------------------------------------

/// One row of the results table (mirrors #N, QE, #Con./CM, #Red./CM).
struct ResultsRow {
    std::string id;
    ModelKind model = ModelKind::gng;
    MetricsReport original;
    std::optional<MetricsReport> reduced;  // growing models with reduction enabled
    std::size_t removed_connections = 0;
    std::string config_hash;
    std::uint64_t seed = 0;
};

inline nlohmann::json results_row_to_json(const ResultsRow& r) {
    nlohmann::json j{{"id", r.id},
                     {"type", to_string(r.model)},
                     {"n_neurons", r.original.n_neurons},
                     {"qe", r.original.qe},
                     {"n_connections", r.original.n_edges},
                     {"cm", r.original.cm},
                     {"n_reduced", nullptr},
                     {"cm_reduced", nullptr},
                     {"coverage", r.original.coverage_fraction},
                     {"n_components", r.original.n_components},
                     {"metrics", metrics_to_json(r.original)},
                     {"provenance", to_json(Provenance{r.config_hash, r.seed})}};
    if (r.reduced) {
        j["n_reduced"] = r.reduced->n_edges;
        j["cm_reduced"] = r.reduced->cm;
        j["removed_connections"] = r.removed_connections;
        j["metrics_reduced"] = metrics_to_json(*r.reduced);
    }
    return j;
}

inline Dataset materialize_dataset(const ExperimentConfig& c, const std::optional<ArmModel>& arm) {
    Dataset data;
    if (c.dataset.path) {
        data = load_dataset(*c.dataset.path, c.dataset.format);
    } else {
        SyntheticSpec spec = *c.dataset.synthetic;
        if (spec.table) {
            if (!arm) throw ConfigError("dataset.synthetic.table_grid: needs an arm model");
            spec.table->arm = *arm;
        }
        data = generate_synthetic(spec, c.dataset.synthetic_seed);
    }
    data = interpolate(data, c.interpolation_rounds);
    data.presentation_order = c.presentation_order;
    return data;
}

/**
 * @brief Writes the projected sample, neuron and edge tables for 3-D plots.
 *
 * Files: samples.csv (trajectory_id,x,y,z), neurons.csv (id,x,y,z),
 * edges.csv (a,b,kind).
 */
inline void export_plot_data(const Network& net, const Dataset& data, std::array<int, 3> joints,
                             const std::filesystem::path& dir,
                             const std::optional<Provenance>& prov = std::nullopt) {
    const auto dim = net.empty() ? data.dim() : net.dim();
    for (std::size_t i = 0; i < 3; ++i) {
        if (joints[i] < 0 || joints[i] >= dim) {
            throw ConfigError("plot joint index " + std::to_string(joints[i]) + " out of range for dimension " +
                              std::to_string(dim));
        }
    }
    if (joints[0] == joints[1] || joints[0] == joints[2] || joints[1] == joints[2]) {
        throw ConfigError("plot joint indices must be distinct");
    }
    std::filesystem::create_directories(dir);
    auto header = [&](std::ofstream& out, const char* cols) {
        write_provenance_comment(out, prov);
        out << cols << ",j" << joints[0] + 1 << ",j" << joints[1] + 1 << ",j" << joints[2] + 1 << '\n';
    };
    auto project = [&](std::ostream& out, const Vector& v) {
        for (const int j : joints) out << ',' << detail::format_double(v[j]);
        out << '\n';
    };
    {
        std::ofstream out(dir / "samples.csv");
        header(out, "trajectory_id");
        for (const auto& t : data.trajectories) {
            for (const auto& s : t.samples) {
                out << t.id;
                project(out, s);
            }
        }
    }
    {
        std::ofstream out(dir / "neurons.csv");
        header(out, "id");
        net.for_each_neuron([&](const Neuron& n) {
            out << n.id;
            project(out, n.weight);
        });
    }
    {
        std::ofstream out(dir / "edges.csv");
        write_provenance_comment(out, prov);
        out << "a,b,kind\n";
        for (const auto& e : net.edges()) out << e.a << ',' << e.b << ',' << to_string(e.kind) << '\n';
    }
}

struct ExperimentOutcome {
    ResultsRow row;
    Network network;
    std::optional<Network> reduced;
    std::vector<PlanResult> plans;  // on the reduced network when present
    std::filesystem::path directory;
};

namespace detail {

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace detail

/**
 * @brief Runs one experiment end to end and writes its results bundle.
 *
 * Output directory `<output_dir>/<id>/` receives dataset.csv, network.json,
 * reduced_network.json and reduction_log.json (growing models with
 * reduction), metrics.json, plans.json plus plan_<k>.csv waypoint files,
 * and plots/. The metrics row is also appended to `<output_dir>/results.jsonl`.
 */
inline ExperimentOutcome run_experiment(const ExperimentConfig& c) {
    const Provenance prov{c.config_hash, c.seed};
    std::optional<ArmModel> arm;
    if (!c.arm_path.empty()) arm = load_arm_model(c.arm_path);

    Dataset data;
    try {
        data = materialize_dataset(c, arm);
    } catch (const Error& e) {
        throw Error("experiment '" + c.id + "': dataset: " + e.what());
    }

    ExperimentOutcome out;
    try {
        out.network = train(data, c.model, c.seed);
    } catch (const Error& e) {
        throw Error("experiment '" + c.id + "': training failed: " + e.what());
    }
    const auto& metric = c.model.metric();
    out.row.id = c.id;
    out.row.model = c.model.kind;
    out.row.config_hash = c.config_hash;
    out.row.seed = c.seed;
    out.row.original = evaluate(out.network, data, metric, c.metrics);

    ReductionResult reduction;
    if (c.reduction_enabled && is_growing(c.model.kind)) {
        out.reduced = out.network;
        reduction = reduce_connections(*out.reduced, c.reduction_threshold);
        out.row.reduced = evaluate(*out.reduced, data, metric, c.metrics);
        out.row.removed_connections = reduction.removed;
    }

    const Network& planning = out.reduced ? *out.reduced : out.network;
    std::vector<PlanQuery> queries = c.plans;
    if (c.random_plans > 0) {
        Rng rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
        const auto flat = detail::flat_samples(data);
        for (std::size_t k = 0; k < c.random_plans; ++k) {
            const Vector& s = *flat[uniform_index(rng, flat.size())];
            const Vector& g = *flat[uniform_index(rng, flat.size())];
            queries.push_back({s, g});
        }
    }
    nlohmann::json plans_json = nlohmann::json::array();
    std::vector<PlanResult> plans;
    for (std::size_t k = 0; k < queries.size(); ++k) {
        nlohmann::json entry{{"index", k}, {"start", to_std(queries[k].start)}, {"goal", to_std(queries[k].goal)}};
        try {
            PlanResult p = plan(planning, queries[k].start, queries[k].goal, {c.plan_edges});
            if (arm) p.stats = path_stats(p, *arm);
            entry["result"] = plan_to_json(p);
            plans.push_back(std::move(p));
        } catch (const NoPathError& e) {
            entry["error"] = e.what();
            plans.emplace_back();
        }
        plans_json.push_back(std::move(entry));
    }

    out.directory = c.output_dir / c.id;
    std::filesystem::create_directories(out.directory);
    {
        std::ofstream ds(out.directory / "dataset.csv");
        write_provenance_comment(ds, prov);
        write_dataset_csv(data, ds);
    }
    detail::write_json(out.directory / "network.json", network_to_json(out.network, prov));
    if (out.reduced) {
        detail::write_json(out.directory / "reduced_network.json", network_to_json(*out.reduced, prov));
        nlohmann::json removed = nlohmann::json::array();
        for (const auto& e : reduction.removed_edges) {
            removed.push_back({{"a", e.a}, {"b", e.b}, {"age", e.age}, {"kind", to_string(e.kind)}});
        }
        detail::write_json(out.directory / "reduction_log.json",
                           {{"threshold", c.reduction_threshold},
                            {"connections_before", out.row.original.n_edges},
                            {"connections_after", out.row.reduced->n_edges},
                            {"removed", removed},
                            {"provenance", to_json(prov)}});
    }
    const auto row = results_row_to_json(out.row);
    detail::write_json(out.directory / "metrics.json", row);
    detail::write_json(out.directory / "plans.json", {{"plans", plans_json}, {"provenance", to_json(prov)}});
    for (std::size_t k = 0; k < plans.size(); ++k) {
        if (plans[k].neuron_path.empty()) continue;
        std::ofstream csv(out.directory / ("plan_" + std::to_string(k) + ".csv"));
        write_waypoints_csv(csv, plans[k], prov);
    }
    export_plot_data(planning, data, c.plot_joints, out.directory / "plots", prov);
    {
        std::ofstream results(c.output_dir / "results.jsonl", std::ios::app);
        results << row.dump() << '\n';
    }
    out.plans = std::move(plans);
    return out;
}

// -- comparison --------------------------------------------------------------

struct ComparisonRow {
    std::string id;
    ModelKind model = ModelKind::gng;
    std::optional<ResultsRow> result;
    std::string failure;  // non-empty when the experiment failed
};

/// Row order of the comparison table.
inline int comparison_rank(ModelKind m) {
    switch (m) {
        case ModelKind::gng: return 0;
        case ModelKind::mgng: return 1;
        case ModelKind::gamma_gng: return 2;
        case ModelKind::sgng: return 3;
        case ModelKind::msom: return 4;
        case ModelKind::gamma_som: return 5;
        case ModelKind::som: return 6;
    }
    return 7;
}

/// Runs every experiment; failures become marked rows instead of aborting.
inline std::vector<ComparisonRow> compare_models(const std::vector<ExperimentConfig>& configs) {
    if (configs.empty()) throw ConfigError("compare needs at least one experiment");
    std::vector<ComparisonRow> rows;
    for (const auto& c : configs) {
        ComparisonRow row{c.id, c.model.kind, std::nullopt, {}};
        try {
            row.result = run_experiment(c).row;
        } catch (const Error& e) {
            row.failure = e.what();
        } catch (const std::exception& e) {
            row.failure = std::string("experiment '") + c.id + "': " + e.what();
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
        return comparison_rank(a.model) < comparison_rank(b.model);
    });
    return rows;
}

namespace detail {

inline std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

inline std::array<std::string, 6> comparison_cells(const ComparisonRow& r) {
    if (!r.result) return {r.id, std::string(to_string(r.model)), "FAILED", "", "", r.failure};
    const auto& res = *r.result;
    std::string red;
    if (res.reduced) red = std::to_string(res.reduced->n_edges) + " / " + fixed(res.reduced->cm, 3);
    return {r.id,
            std::string(to_string(r.model)),
            std::to_string(res.original.n_neurons),
            fixed(res.original.qe, 4),
            std::to_string(res.original.n_edges) + " / " + fixed(res.original.cm, 3),
            red};
}

}  // namespace detail

inline void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << "id,type,#N,QE,#Con.,CM,#Red.,CM red.,status\n";
    for (const auto& r : rows) {
        out << r.id << ',' << to_string(r.model) << ',';
        if (!r.result) {
            std::string msg = r.failure;
            std::replace(msg.begin(), msg.end(), '"', '\'');
            out << ",,,,,,\"FAILED: " << msg << "\"\n";
            continue;
        }
        const auto& res = *r.result;
        out << res.original.n_neurons << ',' << detail::format_double(res.original.qe) << ','
            << res.original.n_edges << ',' << detail::format_double(res.original.cm) << ',';
        if (res.reduced) out << res.reduced->n_edges << ',' << detail::format_double(res.reduced->cm);
        else out << ',';
        out << ",ok\n";
    }
}

inline void write_comparison_text(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    const std::array<std::string, 6> head{"id", "type", "#N", "QE", "#Con. / CM", "#Red. / CM"};
    std::array<std::size_t, 6> width{};
    std::vector<std::array<std::string, 6>> cells;
    for (const auto& r : rows) cells.push_back(detail::comparison_cells(r));
    for (std::size_t k = 0; k < 6; ++k) {
        width[k] = head[k].size();
        for (const auto& c : cells) {
            if (!(k == 5 && c[2] == "FAILED")) width[k] = std::max(width[k], c[k].size());
        }
    }
    auto line = [&](const std::array<std::string, 6>& c) {
        for (std::size_t k = 0; k < 6; ++k) {
            out << std::left << std::setw(static_cast<int>(width[k])) << c[k] << (k + 1 < 6 ? "  " : "");
        }
        out << '\n';
    };
    line(head);
    std::size_t total = 10;
    for (auto w : width) total += w;
    out << std::string(total, '-') << '\n';
    for (const auto& c : cells) line(c);
}

}  // namespace sonn
