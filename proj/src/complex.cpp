#include "topogait/complex.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

namespace topogait {

CubicalComplex build_cubical(const BinaryImage3D& image) {
    if (image.voxels.empty()) throw std::invalid_argument("empty image");
    CubicalComplex q;
    for (const auto& [x, y, z] : image.sorted_voxels()) {
        bool all = true;
        for (int dx = 0; dx <= 1 && all; ++dx)
            for (int dy = 0; dy <= 1 && all; ++dy)
                for (int dz = 0; dz <= 1 && all; ++dz)
                    all = image.contains(x + dx, y + dy, z + dz);
        if (all) q.cubes.push_back({x, y, z});
    }
    return q;
}

namespace {

// A square face keyed by its minimum corner and its constant axis.
struct FaceKey {
    std::array<int, 3> corner;
    int axis;
    bool operator<(const FaceKey& other) const {
        return std::tie(corner, axis) < std::tie(other.corner, other.axis);
    }
};

// The four grid corners of a face, to be sorted lexicographically.
std::array<std::array<int, 3>, 4> face_corners(const FaceKey& f) {
    const int u = (f.axis + 1) % 3;
    const int v = (f.axis + 2) % 3;
    std::array<std::array<int, 3>, 4> corners;
    int i = 0;
    for (int du = 0; du <= 1; ++du) {
        for (int dv = 0; dv <= 1; ++dv) {
            auto c = f.corner;
            c[u] += du;
            c[v] += dv;
            corners[i++] = c;
        }
    }
    std::sort(corners.begin(), corners.end());
    return corners;
}

}  // namespace

SimplicialComplex boundary_surface(const CubicalComplex& cubes, const BinaryImage3D& image) {
    if (cubes.cubes.empty())
        throw std::runtime_error("no volume; silhouette too thin to form cubes");

    // Count cube incidence per square face; boundary faces have count 1.
    std::map<FaceKey, int> face_count;
    for (const auto& cube : cubes.cubes) {
        for (int axis = 0; axis < 3; ++axis) {
            for (int side = 0; side <= 1; ++side) {
                FaceKey f{cube, axis};
                f.corner[axis] += side;
                ++face_count[f];
            }
        }
    }

    std::vector<std::array<int, 3>> grid_vertices;
    std::vector<std::array<std::array<int, 3>, 4>> boundary_squares;
    for (const auto& [face, count] : face_count) {
        if (count != 1) continue;
        auto corners = face_corners(face);
        boundary_squares.push_back(corners);
        for (const auto& c : corners) grid_vertices.push_back(c);
    }
    std::sort(grid_vertices.begin(), grid_vertices.end());
    grid_vertices.erase(std::unique(grid_vertices.begin(), grid_vertices.end()),
                        grid_vertices.end());

    std::map<std::array<int, 3>, VertexId> vertex_id;
    for (std::size_t i = 0; i < grid_vertices.size(); ++i)
        vertex_id[grid_vertices[i]] = static_cast<VertexId>(i);

    SimplicialComplex s;
    s.vertex_grid = grid_vertices;
    s.vertices.reserve(grid_vertices.size());
    for (const auto& [x, y, z] : grid_vertices)
        s.vertices.push_back({x * image.scale_x, y * image.scale_y, z * image.scale_z});

    std::set<std::array<VertexId, 2>> edge_set;
    std::set<std::array<VertexId, 3>> tri_set;
    auto add_edge = [&](VertexId a, VertexId b) {
        if (a > b) std::swap(a, b);
        edge_set.insert({a, b});
    };
    for (const auto& corners : boundary_squares) {
        // Lex-sorted corners a < b < c < d of an axis-aligned square put a
        // and d on the splitting diagonal.
        const VertexId a = vertex_id[corners[0]];
        const VertexId b = vertex_id[corners[1]];
        const VertexId c = vertex_id[corners[2]];
        const VertexId d = vertex_id[corners[3]];
        tri_set.insert({a, b, d});
        tri_set.insert({a, c, d});
        add_edge(a, b);
        add_edge(b, d);
        add_edge(a, c);
        add_edge(c, d);
        add_edge(a, d);
    }
    s.edges.assign(edge_set.begin(), edge_set.end());
    s.triangles.assign(tri_set.begin(), tri_set.end());
    return s;
}

SimplicialComplex make_simplicial(std::vector<Vec3> vertices,
                                  std::vector<std::array<VertexId, 2>> edges,
                                  std::vector<std::array<VertexId, 3>> triangles) {
    SimplicialComplex s;
    s.vertices = std::move(vertices);

    for (auto& e : edges) {
        std::sort(e.begin(), e.end());
        if (e[0] == e[1] || e[1] >= s.vertices.size())
            throw std::invalid_argument("invalid edge");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("duplicate edge");
    s.edges = std::move(edges);

    std::set<std::array<VertexId, 2>> edge_set(s.edges.begin(), s.edges.end());
    for (auto& t : triangles) {
        std::sort(t.begin(), t.end());
        if (t[0] == t[1] || t[1] == t[2] || t[2] >= s.vertices.size())
            throw std::invalid_argument("invalid triangle");
        if (!edge_set.count({t[0], t[1]}) || !edge_set.count({t[0], t[2]}) ||
            !edge_set.count({t[1], t[2]}))
            throw std::invalid_argument("triangle face missing from edge list");
    }
    std::sort(triangles.begin(), triangles.end());
    if (std::adjacent_find(triangles.begin(), triangles.end()) != triangles.end())
        throw std::invalid_argument("duplicate triangle");
    s.triangles = std::move(triangles);
    return s;
}

long long euler_characteristic(const SimplicialComplex& s) {
    return static_cast<long long>(s.vertices.size()) - static_cast<long long>(s.edges.size()) +
           static_cast<long long>(s.triangles.size());
}

void write_off(const SimplicialComplex& s, std::ostream& out) {
    out << "OFF\n" << s.vertices.size() << " " << s.triangles.size() << " 0\n";
    out.precision(17);
    for (const auto& v : s.vertices) out << v.x << " " << v.y << " " << v.z << "\n";
    for (const auto& t : s.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

}  // namespace topogait
