#include "topogait/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace topogait {

namespace {

constexpr double kQuantum = 1e12;

// Keeps equal-by-construction distances in one level despite rounding.
double quantize(double v) { return std::round(v * kQuantum) / kQuantum; }

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

std::vector<ReferencePlane> default_planes() {
    return {
        {"x=0", {1.0, 0.0, 0.0}, 0.0},
        {"x=1", {1.0, 0.0, 0.0}, 1.0},
        {"y=0", {0.0, 1.0, 0.0}, 0.0},
        {"y=1", {0.0, 1.0, 0.0}, 1.0},
        {"x+y=0", {kInvSqrt2, kInvSqrt2, 0.0}, 0.0},
        {"x+y=2", {kInvSqrt2, kInvSqrt2, 0.0}, 2.0 * kInvSqrt2},
        {"x-y=1", {kInvSqrt2, -kInvSqrt2, 0.0}, kInvSqrt2},
        {"y-x=1", {-kInvSqrt2, kInvSqrt2, 0.0}, kInvSqrt2},
    };
}

std::vector<ReferencePlane> depth_planes() {
    return {
        {"x=0", {1.0, 0.0, 0.0}, 0.0},
        {"x=1", {1.0, 0.0, 0.0}, 1.0},
        {"y=0", {0.0, 1.0, 0.0}, 0.0},
        {"y=1", {0.0, 1.0, 0.0}, 1.0},
        {"x+y=0", {kInvSqrt2, kInvSqrt2, 0.0}, 0.0},
        {"x+y=2", {kInvSqrt2, kInvSqrt2, 0.0}, 2.0 * kInvSqrt2},
        {"z=0", {0.0, 0.0, 1.0}, 0.0},
        {"z=1", {0.0, 0.0, 1.0}, 1.0},
    };
}

std::vector<ReferencePlane> load_plane_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open plane config");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path.string() + ": invalid JSON: " + e.what());
    }
    if (!doc.is_array() || doc.empty())
        throw std::runtime_error(path.string() + ": plane config must be a non-empty array");

    std::vector<ReferencePlane> planes;
    for (const auto& item : doc) {
        ReferencePlane p;
        try {
            p.id = item.at("id").get<std::string>();
            const auto& n = item.at("normal");
            p.normal = {n.at(0).get<double>(), n.at(1).get<double>(), n.at(2).get<double>()};
            p.offset = item.at("offset").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(path.string() + ": bad plane record: " + e.what());
        }
        const double len = std::sqrt(dot(p.normal, p.normal));
        if (std::abs(len - 1.0) > 1e-12)
            throw std::runtime_error(path.string() + ": plane '" + p.id +
                                     "' normal is not unit length");
        planes.push_back(std::move(p));
    }
    return planes;
}

std::vector<ReferencePlane> resolve_planes(const std::string& name_or_path) {
    if (name_or_path.empty() || name_or_path == "default") return default_planes();
    if (name_or_path == "depth") return depth_planes();
    return load_plane_config(name_or_path);
}

double filter_value(const SimplicialComplex& s, SimplexRef simplex, const ReferencePlane& plane) {
    switch (simplex.dim) {
        case 0:
            if (simplex.index >= s.vertices.size()) throw std::out_of_range("unknown vertex");
            return plane.distance(s.vertices[simplex.index]);
        case 1: {
            if (simplex.index >= s.edges.size()) throw std::out_of_range("unknown edge");
            const auto& e = s.edges[simplex.index];
            return std::max(plane.distance(s.vertices[e[0]]), plane.distance(s.vertices[e[1]]));
        }
        case 2: {
            if (simplex.index >= s.triangles.size()) throw std::out_of_range("unknown triangle");
            const auto& t = s.triangles[simplex.index];
            return std::max({plane.distance(s.vertices[t[0]]), plane.distance(s.vertices[t[1]]),
                             plane.distance(s.vertices[t[2]])});
        }
        default:
            throw std::out_of_range("unknown simplex dimension");
    }
}

Filtration build_filtration_from_vertex_values(const SimplicialComplex& s,
                                               const std::vector<double>& vertex_values,
                                               const std::string& label) {
    if (vertex_values.size() != s.vertices.size())
        throw std::invalid_argument("one value per vertex required");
    if (s.vertices.empty()) throw std::invalid_argument("empty complex");

    std::vector<double> vv(vertex_values.size());
    for (std::size_t i = 0; i < vv.size(); ++i) vv[i] = quantize(vertex_values[i]);

    // Higher simplices inherit the max over their vertices; taking the max
    // of already-quantized values keeps face/coface comparisons exact.
    struct Entry {
        double value;
        int dim;
        std::uint32_t index;
    };
    std::vector<Entry> entries;
    entries.reserve(s.size());
    for (std::uint32_t i = 0; i < s.vertices.size(); ++i) entries.push_back({vv[i], 0, i});
    for (std::uint32_t i = 0; i < s.edges.size(); ++i) {
        const auto& e = s.edges[i];
        entries.push_back({std::max(vv[e[0]], vv[e[1]]), 1, i});
    }
    for (std::uint32_t i = 0; i < s.triangles.size(); ++i) {
        const auto& t = s.triangles[i];
        entries.push_back({std::max({vv[t[0]], vv[t[1]], vv[t[2]]}), 2, i});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.value, a.dim, a.index) < std::tie(b.value, b.dim, b.index);
    });

    Filtration f;
    f.label = label;
    f.max_value = *std::max_element(vv.begin(), vv.end());
    for (const auto& entry : entries) {
        if (f.levels.empty() || f.levels.back().value != entry.value)
            f.levels.push_back({entry.value, {}});
        f.levels.back().simplices.push_back({entry.dim, entry.index});
    }
    return f;
}

Filtration build_filtration(const SimplicialComplex& s, const ReferencePlane& plane) {
    std::vector<double> values(s.vertices.size());
    for (std::size_t i = 0; i < s.vertices.size(); ++i) values[i] = plane.distance(s.vertices[i]);
    return build_filtration_from_vertex_values(s, values, plane.id);
}

Filtration build_filtration_from_values(const SimplicialComplex& s,
                                        const std::function<double(SimplexRef)>& value,
                                        const std::string& label) {
    if (s.vertices.empty()) throw std::invalid_argument("empty complex");
    struct Entry {
        double value;
        int dim;
        std::uint32_t index;
    };
    std::vector<Entry> entries;
    entries.reserve(s.size());
    double max_vertex = -std::numeric_limits<double>::infinity();
    for (std::uint32_t i = 0; i < s.vertices.size(); ++i) {
        const double v = quantize(value({0, i}));
        max_vertex = std::max(max_vertex, v);
        entries.push_back({v, 0, i});
    }
    for (std::uint32_t i = 0; i < s.edges.size(); ++i)
        entries.push_back({quantize(value({1, i})), 1, i});
    for (std::uint32_t i = 0; i < s.triangles.size(); ++i)
        entries.push_back({quantize(value({2, i})), 2, i});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.value, a.dim, a.index) < std::tie(b.value, b.dim, b.index);
    });

    Filtration f;
    f.label = label;
    f.max_value = max_vertex;
    for (const auto& entry : entries) {
        if (f.levels.empty() || f.levels.back().value != entry.value)
            f.levels.push_back({entry.value, {}});
        f.levels.back().simplices.push_back({entry.dim, entry.index});
    }
    return f;
}

bool is_monotone(const SimplicialComplex& s, const Filtration& f) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> vertex_value(s.vertices.size(), nan);
    std::vector<double> edge_value(s.edges.size(), nan);
    std::vector<char> triangle_seen(s.triangles.size(), 0);
    std::size_t seen = 0;

    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& level : f.levels) {
        if (!(level.value > prev)) return false;
        prev = level.value;
        for (const auto& ref : level.simplices) {
            ++seen;
            switch (ref.dim) {
                case 0:
                    if (ref.index >= s.vertices.size() || !std::isnan(vertex_value[ref.index]))
                        return false;
                    vertex_value[ref.index] = level.value;
                    break;
                case 1: {
                    if (ref.index >= s.edges.size() || !std::isnan(edge_value[ref.index]))
                        return false;
                    const auto& e = s.edges[ref.index];
                    for (VertexId v : e)
                        if (std::isnan(vertex_value[v]) || vertex_value[v] > level.value)
                            return false;
                    edge_value[ref.index] = level.value;
                    break;
                }
                case 2: {
                    if (ref.index >= s.triangles.size() || triangle_seen[ref.index]) return false;
                    triangle_seen[ref.index] = 1;
                    const auto& t = s.triangles[ref.index];
                    const std::array<std::array<VertexId, 2>, 3> faces = {
                        {{t[0], t[1]}, {t[0], t[2]}, {t[1], t[2]}}};
                    for (const auto& face : faces) {
                        const auto it =
                            std::lower_bound(s.edges.begin(), s.edges.end(), face);
                        if (it == s.edges.end() || *it != face) return false;
                        const auto idx = static_cast<std::size_t>(it - s.edges.begin());
                        if (std::isnan(edge_value[idx]) || edge_value[idx] > level.value)
                            return false;
                    }
                    break;
                }
                default:
                    return false;
            }
        }
    }
    return seen == s.size();
}

}  // namespace topogait
