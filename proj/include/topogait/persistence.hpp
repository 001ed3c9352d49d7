#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "topogait/filtration.hpp"

namespace topogait {

inline constexpr double kEssential = std::numeric_limits<double>::infinity();

struct Bar {
    int dim = 0;
    double birth = 0.0;
    double death = kEssential;

    bool essential() const { return std::isinf(death); }
    double length() const { return death - birth; }
    /// Positive-length or never-dying; only these enter signatures.
    bool positive() const { return essential() || death > birth; }
};

struct PersistenceDiagram {
    std::string label;       // plane id or filtration label
    std::vector<Bar> bars;   // sorted by (dim, birth, death); zero-length bars kept
    std::int64_t m0 = 0;     // positive-length dim-0 bars (essentials included)
    std::int64_t m1 = 0;

    std::int64_t essential_count(int dim) const;
    std::int64_t positive_count(int dim) const { return dim == 0 ? m0 : m1; }
    /// Maximum vertex distance of the source filtration (= max dim-0 birth,
    /// since every vertex opens a dim-0 bar).
    double max_filter_value() const;
};

/// Standard persistence pairing of a monotone level filtration, for
/// dimensions 0 and 1. Dimension 0 runs union-find with the elder rule
/// (equal-birth tie: the component with the larger minimum vertex id
/// dies); dimension 1 reduces triangle boundary columns over Z2. Births
/// and deaths are level values, so same-level pairs yield zero-length
/// bars, which are retained but not counted in m0/m1.
PersistenceDiagram compute_persistence(const SimplicialComplex& s, const Filtration& f);

/// Bars of one dimension, optionally dropping zero-length bars.
std::vector<Bar> barcode(const PersistenceDiagram& d, int dim, bool positive_only);

/// Text format: header "plane <id> m0 <n> m1 <n>", then one bar per line
/// as "dim birth death" with "inf" for essential deaths.
void write_diagram(const PersistenceDiagram& d, std::ostream& out);
void write_diagram(const PersistenceDiagram& d, const std::filesystem::path& path);
PersistenceDiagram read_diagram(std::istream& in);
PersistenceDiagram read_diagram(const std::filesystem::path& path);

}  // namespace topogait
