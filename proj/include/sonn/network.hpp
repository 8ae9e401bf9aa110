#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sonn/errors.hpp"
#include "sonn/metric.hpp"

namespace sonn {

enum class EdgeKind : std::uint8_t { topological = 0, temporal = 1, lattice = 2 };
inline constexpr std::size_t kEdgeKindCount = 3;

inline std::string_view to_string(EdgeKind kind) {
    switch (kind) {
        case EdgeKind::topological: return "topological";
        case EdgeKind::temporal: return "temporal";
        case EdgeKind::lattice: return "lattice";
    }
    return "?";
}

inline EdgeKind edge_kind_from_string(std::string_view name) {
    if (name == "topological") return EdgeKind::topological;
    if (name == "temporal") return EdgeKind::temporal;
    if (name == "lattice") return EdgeKind::lattice;
    throw ParseError("unknown edge kind '" + std::string(name) + "'");
}

/// Set of edge kinds a query should follow.
class EdgeFilter {
public:
    constexpr EdgeFilter() = default;

    static constexpr EdgeFilter all() { return EdgeFilter(0b111); }
    static constexpr EdgeFilter only(EdgeKind kind) { return EdgeFilter(bit(kind)); }
    /// Kinds that age during growing-network training.
    static constexpr EdgeFilter aging() { return EdgeFilter(bit(EdgeKind::topological) | bit(EdgeKind::temporal)); }

    constexpr bool accepts(EdgeKind kind) const { return (mask_ & bit(kind)) != 0; }

private:
    constexpr explicit EdgeFilter(std::uint8_t mask) : mask_(mask) {}
    static constexpr std::uint8_t bit(EdgeKind k) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(k)); }

    std::uint8_t mask_ = 0b111;
};

enum class ModelKind { som, msom, gamma_som, gng, mgng, gamma_gng, sgng };

inline constexpr std::array<ModelKind, 7> kAllModels{ModelKind::som, ModelKind::msom, ModelKind::gamma_som,
                                                     ModelKind::gng, ModelKind::mgng, ModelKind::gamma_gng,
                                                     ModelKind::sgng};

inline std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::som: return "som";
        case ModelKind::msom: return "msom";
        case ModelKind::gamma_som: return "gamma_som";
        case ModelKind::gng: return "gng";
        case ModelKind::mgng: return "mgng";
        case ModelKind::gamma_gng: return "gamma_gng";
        case ModelKind::sgng: return "sgng";
    }
    return "?";
}

inline std::optional<ModelKind> model_from_string(std::string_view name) {
    for (auto m : kAllModels) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

inline bool is_growing(ModelKind kind) {
    return kind == ModelKind::gng || kind == ModelKind::mgng || kind == ModelKind::gamma_gng ||
           kind == ModelKind::sgng;
}

struct Neuron {
    NeuronId id = 0;
    Vector weight;
    std::vector<Vector> contexts;  // empty for context-free models
    double error = 0.0;
    std::optional<std::array<int, 2>> grid_pos;
};

struct Edge {
    NeuronId a = 0;  // a < b
    NeuronId b = 0;
    int age = 0;
    EdgeKind kind = EdgeKind::topological;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct PruneResult {
    std::size_t edges_removed = 0;
    std::size_t neurons_removed = 0;
};

/**
 * @brief Neurons plus aged undirected edges.
 *
 * Ids are issued sequentially and never reused, so id-indexed arrays of
 * size `id_bound()` can be used for per-neuron scratch data. At most one
 * edge exists per unordered pair and kind.
 */
class Network {
public:
    explicit Network(ModelKind model = ModelKind::gng) : model_(model) {}

    ModelKind model() const { return model_; }
    void set_model(ModelKind model) { model_ = model; }

    NeuronId add_neuron(Vector weight, std::vector<Vector> contexts = {}) {
        for (const auto& c : contexts) {
            if (c.size() != weight.size()) throw DimensionError("context and weight dimensions differ");
        }
        const auto id = static_cast<NeuronId>(slots_.size());
        Neuron n;
        n.id = id;
        n.weight = std::move(weight);
        n.contexts = std::move(contexts);
        slots_.push_back(std::move(n));
        adjacency_.emplace_back();
        ++live_;
        return id;
    }

    /// Adds a neuron under an explicit id (import); ids in between stay vacant.
    void insert_neuron(Neuron neuron) {
        if (neuron.id < slots_.size()) throw Error("neuron id " + std::to_string(neuron.id) + " already issued");
        slots_.resize(neuron.id);
        adjacency_.resize(neuron.id);
        slots_.push_back(std::move(neuron));
        adjacency_.emplace_back();
        ++live_;
    }

    void remove_neuron(NeuronId id) {
        require(id);
        for (const auto& [other, link] : adjacency_[id]) {
            for (std::size_t k = 0; k < kEdgeKindCount; ++k) {
                if (link[k] >= 0) --edge_count_[k];
            }
            adjacency_[other].erase(id);
        }
        adjacency_[id].clear();
        slots_[id].reset();
        --live_;
    }

    bool contains(NeuronId id) const { return id < slots_.size() && slots_[id].has_value(); }

    const Neuron& neuron(NeuronId id) const {
        require(id);
        return *slots_[id];
    }
    Neuron& neuron(NeuronId id) {
        require(id);
        return *slots_[id];
    }

    std::size_t size() const { return live_; }
    bool empty() const { return live_ == 0; }

    /// One past the largest id ever issued.
    NeuronId id_bound() const { return static_cast<NeuronId>(slots_.size()); }

    std::vector<NeuronId> ids() const {
        std::vector<NeuronId> out;
        out.reserve(live_);
        for (NeuronId i = 0; i < slots_.size(); ++i) {
            if (slots_[i]) out.push_back(i);
        }
        return out;
    }

    /// Visits live neurons in ascending id order.
    template <class F>
    void for_each_neuron(F&& f) const {
        for (const auto& s : slots_) {
            if (s) f(*s);
        }
    }
    template <class F>
    void for_each_neuron(F&& f) {
        for (auto& s : slots_) {
            if (s) f(*s);
        }
    }

    Eigen::Index dim() const {
        for (const auto& s : slots_) {
            if (s) return s->weight.size();
        }
        return 0;
    }

    // -- edges ------------------------------------------------------------

    /// Sets the edge age to zero, creating the edge if absent.
    void refresh_edge(NeuronId a, NeuronId b, EdgeKind kind = EdgeKind::topological) { set_edge(a, b, kind, 0); }

    void set_edge(NeuronId a, NeuronId b, EdgeKind kind, int age) {
        require(a);
        require(b);
        if (a == b) throw Error("self edge on neuron " + std::to_string(a));
        if (age < 0) throw Error("negative edge age");
        auto& slot = adjacency_[a][b][index(kind)];
        if (slot < 0) ++edge_count_[index(kind)];
        slot = age;
        adjacency_[b][a][index(kind)] = age;
    }

    bool has_edge(NeuronId a, NeuronId b, EdgeKind kind) const { return edge_age(a, b, kind).has_value(); }

    /// True if any edge kind accepted by the filter joins a and b.
    bool adjacent(NeuronId a, NeuronId b, EdgeFilter filter = EdgeFilter::all()) const {
        if (!contains(a)) return false;
        const auto it = adjacency_[a].find(b);
        if (it == adjacency_[a].end()) return false;
        for (std::size_t k = 0; k < kEdgeKindCount; ++k) {
            if (it->second[k] >= 0 && filter.accepts(static_cast<EdgeKind>(k))) return true;
        }
        return false;
    }

    std::optional<int> edge_age(NeuronId a, NeuronId b, EdgeKind kind) const {
        if (!contains(a)) return std::nullopt;
        const auto it = adjacency_[a].find(b);
        if (it == adjacency_[a].end() || it->second[index(kind)] < 0) return std::nullopt;
        return it->second[index(kind)];
    }

    bool remove_edge(NeuronId a, NeuronId b, EdgeKind kind) {
        if (!contains(a) || !contains(b)) return false;
        auto it = adjacency_[a].find(b);
        if (it == adjacency_[a].end() || it->second[index(kind)] < 0) return false;
        it->second[index(kind)] = -1;
        if (is_unlinked(it->second)) adjacency_[a].erase(it);
        auto jt = adjacency_[b].find(a);
        jt->second[index(kind)] = -1;
        if (is_unlinked(jt->second)) adjacency_[b].erase(jt);
        --edge_count_[index(kind)];
        return true;
    }

    /// Increments the age of every filtered edge incident to `around`.
    void age_edges(NeuronId around, EdgeFilter filter = EdgeFilter::aging()) {
        require(around);
        for (auto& [other, link] : adjacency_[around]) {
            auto& back = adjacency_[other][around];
            for (std::size_t k = 0; k < kEdgeKindCount; ++k) {
                if (link[k] >= 0 && filter.accepts(static_cast<EdgeKind>(k))) {
                    ++link[k];
                    ++back[k];
                }
            }
        }
    }

    /// Removes edges older than `max_age`, then every neuron left without edges.
    PruneResult prune_stale(int max_age, EdgeFilter filter = EdgeFilter::aging()) {
        PruneResult result;
        for (const auto& e : edges(filter)) {
            if (e.age > max_age) {
                remove_edge(e.a, e.b, e.kind);
                ++result.edges_removed;
            }
        }
        for (NeuronId i = 0; i < slots_.size(); ++i) {
            if (slots_[i] && adjacency_[i].empty()) {
                remove_neuron(i);
                ++result.neurons_removed;
            }
        }
        return result;
    }

    std::size_t edge_count(EdgeFilter filter = EdgeFilter::all()) const {
        std::size_t n = 0;
        for (std::size_t k = 0; k < kEdgeKindCount; ++k) {
            if (filter.accepts(static_cast<EdgeKind>(k))) n += edge_count_[k];
        }
        return n;
    }

    /// All edges ordered by (a, b, kind).
    std::vector<Edge> edges(EdgeFilter filter = EdgeFilter::all()) const {
        std::vector<Edge> out;
        out.reserve(edge_count(filter));
        for (NeuronId a = 0; a < adjacency_.size(); ++a) {
            for (const auto& [b, link] : adjacency_[a]) {
                if (b <= a) continue;
                for (std::size_t k = 0; k < kEdgeKindCount; ++k) {
                    if (link[k] >= 0 && filter.accepts(static_cast<EdgeKind>(k))) {
                        out.push_back({a, b, link[k], static_cast<EdgeKind>(k)});
                    }
                }
            }
        }
        return out;
    }

    /// Neighbors joined by at least one filtered edge, ascending.
    std::vector<NeuronId> neighbors(NeuronId id, EdgeFilter filter = EdgeFilter::all()) const {
        require(id);
        std::vector<NeuronId> out;
        for (const auto& [other, link] : adjacency_[id]) {
            for (std::size_t k = 0; k < kEdgeKindCount; ++k) {
                if (link[k] >= 0 && filter.accepts(static_cast<EdgeKind>(k))) {
                    out.push_back(other);
                    break;
                }
            }
        }
        return out;
    }

    /// Calls f(neighbor) for each neighbor joined by a filtered edge, ascending.
    template <class F>
    void for_each_neighbor(NeuronId id, EdgeFilter filter, F&& f) const {
        for (const auto& [other, link] : adjacency_[id]) {
            for (std::size_t k = 0; k < kEdgeKindCount; ++k) {
                if (link[k] >= 0 && filter.accepts(static_cast<EdgeKind>(k))) {
                    f(other);
                    break;
                }
            }
        }
    }

private:
    using Link = std::array<int, kEdgeKindCount>;  // age per kind, -1 when absent

    static constexpr std::size_t index(EdgeKind k) { return static_cast<std::size_t>(k); }
    static bool is_unlinked(const Link& l) { return l[0] < 0 && l[1] < 0 && l[2] < 0; }

    void require(NeuronId id) const {
        if (!contains(id)) throw Error("no neuron with id " + std::to_string(id));
    }

    struct LinkMap : std::map<NeuronId, Link> {
        Link& operator[](NeuronId k) { return try_emplace(k, Link{-1, -1, -1}).first->second; }
    };

    ModelKind model_;
    std::vector<std::optional<Neuron>> slots_;
    std::vector<LinkMap> adjacency_;
    std::array<std::size_t, kEdgeKindCount> edge_count_{};
    std::size_t live_ = 0;
};

// -- winner search --------------------------------------------------------

struct BmuPair {
    NeuronId first = 0;
    NeuronId second = 0;
    double first_distance = 0.0;   // score used for the comparison
    double second_distance = 0.0;
};

/**
 * @brief Two lowest-scoring distinct neurons outside `blocked`.
 *
 * `score(neuron)` returns any quantity monotone in the distance to the
 * input. Ties go to the lower id.
 */
template <class Score>
BmuPair best_matching_pair(const Network& net, Score&& score, std::span<const NeuronId> blocked = {}) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    BmuPair best{0, 0, inf, inf};
    bool have_first = false, have_second = false;
    net.for_each_neuron([&](const Neuron& n) {
        for (const auto b : blocked) {
            if (b == n.id) return;
        }
        const double d = score(n);
        if (!have_first || d < best.first_distance) {
            if (have_first) {
                best.second = best.first;
                best.second_distance = best.first_distance;
                have_second = true;
            }
            best.first = n.id;
            best.first_distance = d;
            have_first = true;
        } else if (!have_second || d < best.second_distance) {
            best.second = n.id;
            best.second_distance = d;
            have_second = true;
        }
    });
    if (!have_second) {
        throw InsufficientNetworkError("winner search needs at least 2 unblocked neurons, network has " +
                                       std::to_string(net.size()) + " with " + std::to_string(blocked.size()) +
                                       " blocked");
    }
    return best;
}

/// Single lowest-scoring neuron; ties go to the lower id.
template <class Score>
std::pair<NeuronId, double> best_match(const Network& net, Score&& score) {
    if (net.empty()) throw InsufficientNetworkError("winner search on an empty network");
    NeuronId best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    bool have = false;
    net.for_each_neuron([&](const Neuron& n) {
        const double d = score(n);
        if (!have || d < best_d) {
            best = n.id;
            best_d = d;
            have = true;
        }
    });
    return {best, best_d};
}

/// Best and second-best matching unit of `x` by weight under `metric`.
inline BmuPair bmu(const Network& net, const Vector& x, const DistanceMetric& metric,
                   std::span<const NeuronId> blocked = {}) {
    auto result = best_matching_pair(net, [&](const Neuron& n) { return metric.squared(x, n.weight); }, blocked);
    result.first_distance = std::sqrt(result.first_distance);
    result.second_distance = std::sqrt(result.second_distance);
    return result;
}

/// Nearest neuron to `x` by weight under `metric`.
inline NeuronId nearest_neuron(const Network& net, const Vector& x,
                               const DistanceMetric& metric = DistanceMetric{}) {
    return best_match(net, [&](const Neuron& n) { return metric.squared(x, n.weight); }).first;
}

// -- graph queries --------------------------------------------------------

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Hop counts from `source` to every id (kUnreachable for missing or unreachable ids).
inline std::vector<std::size_t> hop_distances_from(const Network& net, NeuronId source,
                                                   EdgeFilter filter = EdgeFilter::all()) {
    std::vector<std::size_t> dist(net.id_bound(), kUnreachable);
    if (!net.contains(source)) throw Error("no neuron with id " + std::to_string(source));
    std::queue<NeuronId> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        const auto u = frontier.front();
        frontier.pop();
        net.for_each_neighbor(u, filter, [&](NeuronId v) {
            if (dist[v] == kUnreachable) {
                dist[v] = dist[u] + 1;
                frontier.push(v);
            }
        });
    }
    return dist;
}

/// Shortest edge-count path length, or nullopt when unreachable.
inline std::optional<std::size_t> hop_distance(const Network& net, NeuronId a, NeuronId b,
                                               EdgeFilter filter = EdgeFilter::all()) {
    if (!net.contains(b)) throw Error("no neuron with id " + std::to_string(b));
    const auto d = hop_distances_from(net, a, filter)[b];
    if (d == kUnreachable) return std::nullopt;
    return d;
}

/// Component label per id (-1 for vacant ids); labels follow the smallest member id.
inline std::vector<int> component_labels(const Network& net, EdgeFilter filter = EdgeFilter::all()) {
    std::vector<int> label(net.id_bound(), -1);
    int next = 0;
    std::vector<NeuronId> stack;
    net.for_each_neuron([&](const Neuron& n) {
        if (label[n.id] >= 0) return;
        label[n.id] = next;
        stack.push_back(n.id);
        while (!stack.empty()) {
            const auto u = stack.back();
            stack.pop_back();
            net.for_each_neighbor(u, filter, [&](NeuronId v) {
                if (label[v] < 0) {
                    label[v] = next;
                    stack.push_back(v);
                }
            });
        }
        ++next;
    });
    return label;
}

/// Partition of the neurons by edge connectivity; each set ascending.
inline std::vector<std::vector<NeuronId>> connected_components(const Network& net,
                                                               EdgeFilter filter = EdgeFilter::all()) {
    const auto label = component_labels(net, filter);
    std::vector<std::vector<NeuronId>> out;
    for (NeuronId i = 0; i < label.size(); ++i) {
        if (label[i] < 0) continue;
        if (static_cast<std::size_t>(label[i]) >= out.size()) out.resize(static_cast<std::size_t>(label[i]) + 1);
        out[static_cast<std::size_t>(label[i])].push_back(i);
    }
    return out;
}

inline std::size_t component_count(const Network& net, EdgeFilter filter = EdgeFilter::all()) {
    return connected_components(net, filter).size();
}

}  // namespace sonn
