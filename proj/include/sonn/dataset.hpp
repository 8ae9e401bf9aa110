#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "sonn/errors.hpp"
#include "sonn/kinematics.hpp"
#include "sonn/metric.hpp"
#include "sonn/random.hpp"

namespace sonn {

enum class TrajectorySource { file, synthetic, interpolated };

/// Temporally ordered samples of one recorded or generated motion.
struct Trajectory {
    std::string id;
    std::vector<Vector> samples;
    TrajectorySource source = TrajectorySource::file;
};

enum class PresentationOrder { trajectory_sequential, shuffled_trajectories };

inline std::string_view to_string(PresentationOrder order) {
    return order == PresentationOrder::trajectory_sequential ? "trajectory-sequential"
                                                             : "shuffled-trajectories";
}

inline PresentationOrder presentation_order_from_string(std::string_view name) {
    if (name == "trajectory-sequential") return PresentationOrder::trajectory_sequential;
    if (name == "shuffled-trajectories") return PresentationOrder::shuffled_trajectories;
    throw ConfigError("unknown presentation order '" + std::string(name) + "'");
}

/**
 * @brief Training data for every model.
 *
 * Samples inside a trajectory are never reordered; shuffling, when
 * enabled, permutes whole trajectories only.
 */
struct Dataset {
    std::vector<Trajectory> trajectories;
    PresentationOrder presentation_order = PresentationOrder::trajectory_sequential;

    bool empty() const { return sample_count() == 0; }

    std::size_t sample_count() const {
        std::size_t n = 0;
        for (const auto& t : trajectories) n += t.samples.size();
        return n;
    }

    Eigen::Index dim() const {
        for (const auto& t : trajectories) {
            if (!t.samples.empty()) return t.samples.front().size();
        }
        return 0;
    }

    /// Calls f(sample) over every sample in storage order.
    template <class F>
    void for_each_sample(F&& f) const {
        for (const auto& t : trajectories) {
            for (const auto& s : t.samples) f(s);
        }
    }

    std::pair<Vector, Vector> bounding_box() const {
        const auto d = dim();
        Vector lo = Vector::Constant(d, std::numeric_limits<double>::infinity());
        Vector hi = Vector::Constant(d, -std::numeric_limits<double>::infinity());
        for_each_sample([&](const Vector& s) {
            lo = lo.cwiseMin(s);
            hi = hi.cwiseMax(s);
        });
        return {lo, hi};
    }
};

/// Order in which trajectories are presented during one training pass.
inline std::vector<std::size_t> presentation_sequence(const Dataset& data, Rng& rng) {
    std::vector<std::size_t> order(data.trajectories.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (data.presentation_order == PresentationOrder::shuffled_trajectories) shuffle(order, rng);
    return order;
}

/// Checks the structural invariants; throws on the first violation.
inline void validate_dataset(const Dataset& data) {
    if (data.empty()) throw EmptyDatasetError("dataset contains no samples");
    const auto d = data.dim();
    for (const auto& t : data.trajectories) {
        if (t.samples.size() < 2) {
            throw DatasetError("trajectory '" + t.id + "' has " + std::to_string(t.samples.size()) +
                               " sample(s); at least 2 are required");
        }
        for (const auto& s : t.samples) {
            if (s.size() != d) {
                throw DimensionError("trajectory '" + t.id + "' mixes sample dimensions " +
                                     std::to_string(d) + " and " + std::to_string(s.size()));
            }
            if (!s.allFinite()) throw DatasetError("trajectory '" + t.id + "' has a non-finite angle");
        }
    }
}

enum class DatasetFormat { csv, json };

inline DatasetFormat dataset_format_from_string(std::string_view name) {
    if (name == "csv") return DatasetFormat::csv;
    if (name == "json") return DatasetFormat::json;
    throw ConfigError("unknown dataset format '" + std::string(name) + "'");
}

inline DatasetFormat dataset_format_for(const std::filesystem::path& path) {
    return path.extension() == ".json" ? DatasetFormat::json : DatasetFormat::csv;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::optional<double> parse_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return value;
}

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

/// Groups rows by id in order of first appearance.
class TrajectoryGrouper {
public:
    void add(const std::string& id, Vector sample) {
        auto it = index_.find(id);
        if (it == index_.end()) {
            it = index_.emplace(id, trajectories_.size()).first;
            trajectories_.push_back({id, {}, TrajectorySource::file});
        }
        trajectories_[it->second].samples.push_back(std::move(sample));
    }

    std::vector<Trajectory> take() { return std::move(trajectories_); }

private:
    std::map<std::string, std::size_t> index_;
    std::vector<Trajectory> trajectories_;
};

inline Dataset parse_csv(std::istream& in, Eigen::Index expected_dim) {
    TrajectoryGrouper grouper;
    std::string line;
    std::size_t line_no = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split_fields(text);
        if (first_row && fields.front() == "trajectory_id") {
            first_row = false;
            continue;
        }
        first_row = false;
        if (static_cast<Eigen::Index>(fields.size()) != expected_dim + 1) {
            throw DimensionError("line " + std::to_string(line_no) + ": expected trajectory id and " +
                                 std::to_string(expected_dim) + " angles, got " +
                                 std::to_string(fields.size() - 1) + " angle field(s)");
        }
        if (fields.front().empty()) throw ParseError("empty trajectory id", line_no);
        Vector sample(expected_dim);
        for (Eigen::Index j = 0; j < expected_dim; ++j) {
            const auto v = parse_double(fields[static_cast<std::size_t>(j) + 1]);
            if (!v) {
                throw ParseError("cannot parse angle '" + std::string(fields[static_cast<std::size_t>(j) + 1]) + "'",
                                 line_no);
            }
            if (!std::isfinite(*v)) throw ParseError("non-finite angle", line_no);
            sample[j] = *v;
        }
        grouper.add(std::string(fields.front()), std::move(sample));
    }
    Dataset data;
    data.trajectories = grouper.take();
    return data;
}

inline Dataset parse_json(std::istream& in, Eigen::Index expected_dim) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!j.contains("trajectories") || !j["trajectories"].is_array()) {
        throw ParseError("missing 'trajectories' array");
    }
    Dataset data;
    for (std::size_t t = 0; t < j["trajectories"].size(); ++t) {
        const auto& jt = j["trajectories"][t];
        Trajectory traj;
        traj.source = TrajectorySource::file;
        try {
            traj.id = jt.at("id").get<std::string>();
            for (const auto& row : jt.at("samples")) {
                if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != expected_dim) {
                    throw DimensionError("trajectory '" + traj.id + "': expected " +
                                         std::to_string(expected_dim) + " angles per sample");
                }
                Vector s(expected_dim);
                for (Eigen::Index k = 0; k < expected_dim; ++k) s[k] = row[static_cast<std::size_t>(k)].get<double>();
                traj.samples.push_back(std::move(s));
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("trajectories[" + std::to_string(t) + "]: " + e.what());
        }
        data.trajectories.push_back(std::move(traj));
    }
    return data;
}

}  // namespace detail

/**
 * @brief Read a dataset.
 *
 * CSV rows are `trajectory_id,j1,...,j6` with an optional header row and
 * `#` comment lines. JSON is `{"trajectories": [{"id": ..., "samples": [[...], ...]}]}`.
 */
inline Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format,
                            Eigen::Index expected_dim = kJointCount) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file " + path.string());
    Dataset data = format == DatasetFormat::csv ? detail::parse_csv(in, expected_dim)
                                                : detail::parse_json(in, expected_dim);
    if (data.empty()) throw EmptyDatasetError("dataset file " + path.string() + " contains no samples");
    validate_dataset(data);
    return data;
}

inline void write_dataset_csv(const Dataset& data, std::ostream& out) {
    out << "trajectory_id";
    for (Eigen::Index j = 0; j < data.dim(); ++j) out << ",j" << (j + 1);
    out << '\n';
    for (const auto& t : data.trajectories) {
        for (const auto& s : t.samples) {
            out << t.id;
            for (Eigen::Index j = 0; j < s.size(); ++j) out << ',' << detail::format_double(s[j]);
            out << '\n';
        }
    }
}

inline nlohmann::json dataset_to_json(const Dataset& data) {
    nlohmann::json trajectories = nlohmann::json::array();
    for (const auto& t : data.trajectories) {
        nlohmann::json samples = nlohmann::json::array();
        for (const auto& s : t.samples) samples.push_back(std::vector<double>(s.data(), s.data() + s.size()));
        trajectories.push_back({{"id", t.id}, {"samples", samples}});
    }
    return {{"trajectories", trajectories}};
}

inline void save_dataset(const Dataset& data, const std::filesystem::path& path, DatasetFormat format) {
    for (const auto& t : data.trajectories) {
        if (t.id.find_first_of(",\n#") != std::string::npos || t.id.empty()) {
            throw DatasetError("trajectory id '" + t.id + "' cannot be written");
        }
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write dataset file " + path.string());
    if (format == DatasetFormat::csv) {
        write_dataset_csv(data, out);
    } else {
        out << dataset_to_json(data).dump(2) << '\n';
    }
}

/// Inserts linear midpoints between adjacent samples, `rounds` times.
/// Output length is (n - 1) * 2^rounds + 1.
inline Trajectory interpolate(const Trajectory& traj, int rounds) {
    if (rounds < 0) throw ConfigError("interpolation rounds must be >= 0");
    Trajectory out = traj;
    for (int r = 0; r < rounds; ++r) {
        std::vector<Vector> dense;
        dense.reserve(out.samples.size() * 2);
        for (std::size_t i = 0; i + 1 < out.samples.size(); ++i) {
            dense.push_back(out.samples[i]);
            dense.push_back(0.5 * (out.samples[i] + out.samples[i + 1]));
        }
        if (!out.samples.empty()) dense.push_back(out.samples.back());
        out.samples = std::move(dense);
    }
    if (rounds > 0) out.source = TrajectorySource::interpolated;
    return out;
}

inline Dataset interpolate(const Dataset& data, int rounds) {
    Dataset out;
    out.presentation_order = data.presentation_order;
    out.trajectories.reserve(data.trajectories.size());
    for (const auto& t : data.trajectories) out.trajectories.push_back(interpolate(t, rounds));
    return out;
}

/// Goal placement on a grid of Cartesian positions above a table.
struct TableGrid {
    ArmModel arm;
    Eigen::Vector3d origin{0.15, -0.15, 0.0};  // table corner, base frame, meters
    std::size_t rows = 4;
    std::size_t cols = 4;
    double spacing = 0.05;
    double height = 0.05;          // above the table surface
    std::size_t candidates = 4000;  // random configurations searched per grid point
};

struct SyntheticSpec {
    std::size_t trajectories = 15;
    std::size_t samples = 50;
    Vector lower = Vector::Constant(kJointCount, -180.0);
    Vector upper = Vector::Constant(kJointCount, 180.0);
    /// Lateral deviation of the curve control points, as a fraction of the box width.
    double bend = 0.15;
    /// When set, start and goal configurations are chosen so that their
    /// end-effector positions lie on the grid instead of uniformly in the box.
    std::optional<TableGrid> table;
};

namespace detail {

inline Vector random_in_box(const Vector& lo, const Vector& hi, Rng& rng) {
    Vector v(lo.size());
    for (Eigen::Index j = 0; j < lo.size(); ++j) v[j] = uniform(rng, lo[j], hi[j]);
    return v;
}

/// For every grid point, the candidate configuration whose end effector is closest to it.
inline std::vector<Vector> table_grid_configs(const SyntheticSpec& spec, const TableGrid& grid, Rng& rng) {
    std::vector<Vector> candidates;
    std::vector<Eigen::Vector3d> positions;
    candidates.reserve(grid.candidates);
    for (std::size_t c = 0; c < grid.candidates; ++c) {
        candidates.push_back(random_in_box(spec.lower, spec.upper, rng));
        positions.push_back(fk(grid.arm, candidates.back()).position);
    }
    std::vector<Vector> configs;
    for (std::size_t r = 0; r < grid.rows; ++r) {
        for (std::size_t c = 0; c < grid.cols; ++c) {
            const Eigen::Vector3d target = grid.origin + Eigen::Vector3d(static_cast<double>(r) * grid.spacing,
                                                                         static_cast<double>(c) * grid.spacing,
                                                                         grid.height);
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < positions.size(); ++k) {
                const double d = (positions[k] - target).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = k;
                }
            }
            configs.push_back(candidates[best]);
        }
    }
    return configs;
}

}  // namespace detail

/**
 * @brief Seeded synthetic joint trajectories.
 *
 * Each trajectory is a cubic Bezier curve between a start and a goal
 * configuration, with two interior control points displaced from the
 * straight line, sampled at uniform parameter steps and clamped to the
 * joint-limit box.
 */
inline Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    if (spec.trajectories == 0) throw ConfigError("synthetic.trajectories must be positive");
    if (spec.samples < 2) throw ConfigError("synthetic.samples must be at least 2");
    if (spec.lower.size() != spec.upper.size() || spec.lower.size() == 0) {
        throw ConfigError("synthetic joint limits must have matching non-zero size");
    }
    if ((spec.upper - spec.lower).minCoeff() < 0.0) throw ConfigError("synthetic lower limit exceeds upper");
    if (spec.table && spec.lower.size() != kJointCount) {
        throw ConfigError("table grid layout needs 6 joint limits");
    }

    Rng rng(seed);
    std::vector<Vector> grid_configs;
    if (spec.table) {
        if (spec.table->rows * spec.table->cols == 0 || spec.table->candidates == 0) {
            throw ConfigError("table grid must have positive rows, cols and candidates");
        }
        grid_configs = detail::table_grid_configs(spec, *spec.table, rng);
    }
    auto endpoint = [&]() -> Vector {
        if (grid_configs.empty()) return detail::random_in_box(spec.lower, spec.upper, rng);
        return grid_configs[uniform_index(rng, grid_configs.size())];
    };

    const Vector width = spec.upper - spec.lower;
    Dataset data;
    for (std::size_t t = 0; t < spec.trajectories; ++t) {
        const Vector start = endpoint();
        const Vector goal = endpoint();
        Vector c1 = start + (goal - start) / 3.0;
        Vector c2 = start + 2.0 * (goal - start) / 3.0;
        for (Eigen::Index j = 0; j < c1.size(); ++j) {
            c1[j] += spec.bend * width[j] * uniform(rng, -1.0, 1.0);
            c2[j] += spec.bend * width[j] * uniform(rng, -1.0, 1.0);
        }
        Trajectory traj;
        traj.id = "syn" + std::to_string(t);
        traj.source = TrajectorySource::synthetic;
        for (std::size_t i = 0; i < spec.samples; ++i) {
            const double u = static_cast<double>(i) / static_cast<double>(spec.samples - 1);
            const double v = 1.0 - u;
            Vector q = v * v * v * start + 3.0 * v * v * u * c1 + 3.0 * v * u * u * c2 + u * u * u * goal;
            traj.samples.push_back(q.cwiseMax(spec.lower).cwiseMin(spec.upper));
        }
        data.trajectories.push_back(std::move(traj));
    }
    return data;
}

}  // namespace sonn
