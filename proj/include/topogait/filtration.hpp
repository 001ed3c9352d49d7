#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "topogait/complex.hpp"

namespace topogait {

/// Plane in Hesse normal form; distance(p) = |normal . p - offset|.
struct ReferencePlane {
    std::string id;
    Vec3 normal;     // unit length
    double offset = 0.0;

    double distance(const Vec3& p) const { return std::abs(dot(normal, p) - offset); }
};

/// The eight reference planes in fixed order: vertical x=0, x=1;
/// horizontal y=0, y=1; oblique x+y=0, x+y=2, x-y=1, y-x=1.
std::vector<ReferencePlane> default_planes();

/// Variant set with two oblique planes (x+y=0, x+y=2) and two depth
/// planes (z=0, z=1) in place of the x-y obliques.
std::vector<ReferencePlane> depth_planes();

/// Reads a JSON list of {id, normal, offset} records; rejects normals
/// whose length deviates from 1 by more than 1e-12.
std::vector<ReferencePlane> load_plane_config(const std::filesystem::path& path);

/// Resolves a --planes argument: "default", "depth", or a config path.
std::vector<ReferencePlane> resolve_planes(const std::string& name_or_path);

struct FiltrationLevel {
    double value = 0.0;
    std::vector<SimplexRef> simplices;  // ascending dimension, then index
};

/// Level-batched filtration: all simplices of equal filter value enter
/// together, levels in strictly increasing value order.
struct Filtration {
    std::string label;
    std::vector<FiltrationLevel> levels;
    double max_value = 0.0;  // maximum vertex value

    std::size_t level_count() const { return levels.size(); }
};

/// Filter value of one simplex: vertex distance to the plane, or the
/// maximum over the simplex's vertices. Throws on an out-of-range index.
double filter_value(const SimplicialComplex& s, SimplexRef simplex, const ReferencePlane& plane);

/// Groups the whole complex by plane distance (quantized to 12 decimal
/// digits so equal-by-construction values land in one level).
Filtration build_filtration(const SimplicialComplex& s, const ReferencePlane& plane);

/// Same grouping machinery for an arbitrary per-vertex value assignment;
/// higher simplices take the maximum over their vertices.
Filtration build_filtration_from_vertex_values(const SimplicialComplex& s,
                                               const std::vector<double>& vertex_values,
                                               const std::string& label);

/// Fully general: one value per simplex. The caller must supply a
/// monotone assignment (faces never above cofaces); use is_monotone to check.
Filtration build_filtration_from_values(const SimplicialComplex& s,
                                        const std::function<double(SimplexRef)>& value,
                                        const std::string& label);

/// True when every simplex's level value is >= the level values of all
/// its faces and the filtration enumerates the complex exactly once.
bool is_monotone(const SimplicialComplex& s, const Filtration& f);

}  // namespace topogait
