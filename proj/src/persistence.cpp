#include "topogait/persistence.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace topogait {

std::int64_t PersistenceDiagram::essential_count(int dim) const {
    return std::count_if(bars.begin(), bars.end(),
                         [dim](const Bar& b) { return b.dim == dim && b.essential(); });
}

double PersistenceDiagram::max_filter_value() const {
    double k = 0.0;
    for (const Bar& b : bars)
        if (b.dim == 0) k = std::max(k, b.birth);
    return k;
}

namespace {

// Union-find tracking, per component root, the birth value and the
// minimum member vertex id (the elder-rule tie-breaker).
class Components {
public:
    explicit Components(std::size_t n)
        : parent_(n, kNone), size_(n, 1), birth_(n, 0.0), min_vertex_(n, 0) {}

    void create(std::uint32_t v, double birth) {
        parent_[v] = v;
        birth_[v] = birth;
        min_vertex_[v] = v;
    }

    bool alive(std::uint32_t v) const { return parent_[v] != kNone; }

    std::uint32_t find(std::uint32_t v) {
        std::uint32_t root = v;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[v] != root) {
            const std::uint32_t next = parent_[v];
            parent_[v] = root;
            v = next;
        }
        return root;
    }

    double birth(std::uint32_t root) const { return birth_[root]; }
    std::uint32_t min_vertex(std::uint32_t root) const { return min_vertex_[root]; }

    // Merges two distinct roots; returns the birth value of the dying
    // component. The older component survives; on equal births the one
    // with the larger minimum vertex id dies.
    double merge(std::uint32_t ra, std::uint32_t rb) {
        assert(ra != rb);
        std::uint32_t survivor = ra, dying = rb;
        if (birth_[rb] < birth_[ra] ||
            (birth_[rb] == birth_[ra] && min_vertex_[rb] < min_vertex_[ra])) {
            std::swap(survivor, dying);
        }
        const double dying_birth = birth_[dying];

        // Attach the smaller tree; the surviving metadata goes to the new root.
        std::uint32_t root = survivor, child = dying;
        if (size_[child] > size_[root]) std::swap(root, child);
        parent_[child] = root;
        size_[root] += size_[child];
        birth_[root] = birth_[survivor];
        min_vertex_[root] = std::min(min_vertex_[survivor], min_vertex_[dying]);
        return dying_birth;
    }

private:
    static constexpr std::uint32_t kNone = 0xffffffffu;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::vector<double> birth_;
    std::vector<std::uint32_t> min_vertex_;
};

// Symmetric difference of two ascending ordinal lists (Z2 column addition).
std::vector<std::uint32_t> add_columns(const std::vector<std::uint32_t>& a,
                                       const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
    return out;
}

}  // namespace

PersistenceDiagram compute_persistence(const SimplicialComplex& s, const Filtration& f) {
    if (!is_monotone(s, f)) throw std::invalid_argument("filtration is not monotone");

    PersistenceDiagram diagram;
    diagram.label = f.label;

    // Edge ordinal = position among edges in filtration order; the
    // reduction pairs triangle columns against these rows.
    std::vector<std::uint32_t> edge_ordinal(s.edges.size(), 0);
    std::vector<std::uint32_t> ordinal_to_edge(s.edges.size(), 0);
    std::vector<double> edge_value(s.edges.size(), 0.0);
    {
        std::uint32_t next = 0;
        for (const auto& level : f.levels) {
            for (const auto& ref : level.simplices) {
                if (ref.dim != 1) continue;
                edge_ordinal[ref.index] = next;
                ordinal_to_edge[next] = ref.index;
                edge_value[ref.index] = level.value;
                ++next;
            }
        }
    }

    // Pair-lookup for triangle boundaries.
    std::unordered_map<std::uint64_t, std::uint32_t> edge_index;
    edge_index.reserve(s.edges.size() * 2);
    for (std::uint32_t i = 0; i < s.edges.size(); ++i) {
        const auto& e = s.edges[i];
        edge_index[(static_cast<std::uint64_t>(e[0]) << 32) | e[1]] = i;
    }
    auto boundary_edge = [&](VertexId a, VertexId b) {
        return edge_index.at((static_cast<std::uint64_t>(a) << 32) | b);
    };

    Components components(s.vertices.size());
    std::vector<char> edge_creates(s.edges.size(), 0);
    std::vector<char> edge_killed(s.edges.size(), 0);
    std::vector<double> edge_death(s.edges.size(), 0.0);

    // Reduced columns of triangles that claimed a low, indexed by that low.
    std::vector<std::int32_t> low_owner(s.edges.size(), -1);
    std::vector<std::vector<std::uint32_t>> owner_column(s.edges.size());

    for (const auto& level : f.levels) {
        for (const auto& ref : level.simplices) {
            switch (ref.dim) {
                case 0:
                    components.create(ref.index, level.value);
                    break;
                case 1: {
                    const auto& e = s.edges[ref.index];
                    const std::uint32_t ra = components.find(e[0]);
                    const std::uint32_t rb = components.find(e[1]);
                    if (ra == rb) {
                        edge_creates[ref.index] = 1;
                    } else {
                        const double dying_birth = components.merge(ra, rb);
                        diagram.bars.push_back({0, dying_birth, level.value});
                    }
                    break;
                }
                case 2: {
                    const auto& t = s.triangles[ref.index];
                    std::vector<std::uint32_t> column = {
                        edge_ordinal[boundary_edge(t[0], t[1])],
                        edge_ordinal[boundary_edge(t[0], t[2])],
                        edge_ordinal[boundary_edge(t[1], t[2])]};
                    std::sort(column.begin(), column.end());
                    while (!column.empty()) {
                        const std::uint32_t low = column.back();
                        if (low_owner[low] < 0) {
                            const std::uint32_t edge = ordinal_to_edge[low];
                            assert(edge_creates[edge]);
                            low_owner[low] = static_cast<std::int32_t>(ref.index);
                            owner_column[low] = column;
                            edge_killed[edge] = 1;
                            edge_death[edge] = level.value;
                            break;
                        }
                        column = add_columns(column, owner_column[low]);
                    }
                    // An emptied column means the triangle opens a
                    // 2-dimensional class, which this artifact does not track.
                    break;
                }
                default:
                    break;
            }
        }
    }

    // Surviving components are the essential dim-0 classes.
    for (std::uint32_t v = 0; v < s.vertices.size(); ++v) {
        if (!components.alive(v)) continue;
        if (components.find(v) == v)
            diagram.bars.push_back({0, components.birth(components.find(v)), kEssential});
    }

    for (std::uint32_t e = 0; e < s.edges.size(); ++e) {
        if (!edge_creates[e]) continue;
        if (edge_killed[e])
            diagram.bars.push_back({1, edge_value[e], edge_death[e]});
        else
            diagram.bars.push_back({1, edge_value[e], kEssential});
    }

    std::sort(diagram.bars.begin(), diagram.bars.end(), [](const Bar& a, const Bar& b) {
        return std::tie(a.dim, a.birth, a.death) < std::tie(b.dim, b.birth, b.death);
    });
    for (const Bar& b : diagram.bars) {
        if (!b.positive()) continue;
        (b.dim == 0 ? diagram.m0 : diagram.m1) += 1;
    }
    return diagram;
}

std::vector<Bar> barcode(const PersistenceDiagram& d, int dim, bool positive_only) {
    if (dim != 0 && dim != 1) throw std::invalid_argument("dimension must be 0 or 1");
    std::vector<Bar> out;
    for (const Bar& b : d.bars) {
        if (b.dim != dim) continue;
        if (positive_only && !b.positive()) continue;
        out.push_back(b);
    }
    return out;
}

void write_diagram(const PersistenceDiagram& d, std::ostream& out) {
    out << "plane " << d.label << " m0 " << d.m0 << " m1 " << d.m1 << "\n";
    out.precision(17);
    for (const Bar& b : d.bars) {
        out << b.dim << " " << b.birth << " ";
        if (b.essential())
            out << "inf\n";
        else
            out << b.death << "\n";
    }
}

void write_diagram(const PersistenceDiagram& d, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    write_diagram(d, out);
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

PersistenceDiagram read_diagram(std::istream& in) {
    PersistenceDiagram d;
    std::string keyword;
    std::string m0_key, m1_key;
    std::int64_t m0 = 0, m1 = 0;
    if (!(in >> keyword >> d.label >> m0_key >> m0 >> m1_key >> m1) || keyword != "plane" ||
        m0_key != "m0" || m1_key != "m1")
        throw std::runtime_error("diagram: malformed header");

    int dim = 0;
    double birth = 0.0;
    std::string death_token;
    while (in >> dim >> birth >> death_token) {
        Bar b;
        b.dim = dim;
        b.birth = birth;
        if (death_token == "inf") {
            b.death = kEssential;
        } else {
            std::size_t pos = 0;
            b.death = std::stod(death_token, &pos);
            if (pos != death_token.size()) throw std::runtime_error("diagram: malformed death");
        }
        if (b.dim != 0 && b.dim != 1) throw std::runtime_error("diagram: dimension must be 0 or 1");
        if (!b.essential() && b.death < b.birth)
            throw std::runtime_error("diagram: death before birth");
        d.bars.push_back(b);
    }
    for (const Bar& b : d.bars) {
        if (!b.positive()) continue;
        (b.dim == 0 ? d.m0 : d.m1) += 1;
    }
    if (d.m0 != m0 || d.m1 != m1)
        throw std::runtime_error("diagram: header counts do not match the bars");
    return d;
}

PersistenceDiagram read_diagram(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open diagram");
    try {
        return read_diagram(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

}  // namespace topogait
