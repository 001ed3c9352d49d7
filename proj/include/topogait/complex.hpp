#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "topogait/silhouette_io.hpp"

namespace topogait {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

/// Set of unit cubes, each identified by its minimum corner. A cube may
/// only be present when all 8 of its corners are foreground voxels.
struct CubicalComplex {
    std::vector<std::array<int, 3>> cubes;  // sorted, unique anchors
    std::size_t size() const { return cubes.size(); }
};

/// Exactly the cubes whose 8 corners are foreground points of the image.
CubicalComplex build_cubical(const BinaryImage3D& image);

using VertexId = std::uint32_t;

struct SimplexRef {
    int dim = 0;            // 0 vertex, 1 edge, 2 triangle
    std::uint32_t index = 0;
    bool operator==(const SimplexRef&) const = default;
};

/// Triangulated surface. Vertex ids follow the lexicographic order of the
/// integer grid coordinates; edge and triangle lists are sorted by their
/// (ascending) vertex-id tuples, so construction is order-independent.
struct SimplicialComplex {
    std::vector<Vec3> vertices;                        // normalized coordinates
    std::vector<std::array<int, 3>> vertex_grid;       // integer grid coordinates
    std::vector<std::array<VertexId, 2>> edges;
    std::vector<std::array<VertexId, 3>> triangles;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t edge_count() const { return edges.size(); }
    std::size_t triangle_count() const { return triangles.size(); }
    std::size_t size() const { return vertices.size() + edges.size() + triangles.size(); }
};

/// Builds a complex from explicit simplex lists: canonicalizes the order,
/// rejects duplicates and any missing face. vertex_grid is left empty.
SimplicialComplex make_simplicial(std::vector<Vec3> vertices,
                                  std::vector<std::array<VertexId, 2>> edges,
                                  std::vector<std::array<VertexId, 3>> triangles);

/// Collects the square faces incident to exactly one cube, splits each
/// square into two triangles along the diagonal through its
/// lexicographically smallest corner, and closes under faces. Vertex
/// coordinates are normalized with the image scales.
/// Throws if the cube set is empty (region thinner than 2 voxels).
SimplicialComplex boundary_surface(const CubicalComplex& cubes, const BinaryImage3D& image);

/// #vertices - #edges + #triangles.
long long euler_characteristic(const SimplicialComplex& s);

/// OFF text mesh (vertices then triangles) for external viewers.
void write_off(const SimplicialComplex& s, std::ostream& out);

}  // namespace topogait
