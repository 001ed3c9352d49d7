// Test-only reference implementations, kept independent of the library's
// computation paths: dense Z2 rank homology, textbook single-matrix
// persistence reduction, and exhaustive bottleneck search.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "topogait/complex.hpp"
#include "topogait/filtration.hpp"
#include "topogait/persistence.hpp"

namespace oracles {

struct HomologyRanks {
    long long h0 = 0;
    long long h1 = 0;
};

/// Betti numbers over Z2 by Gaussian elimination on the full boundary
/// matrices: h0 = V - rank d1, h1 = (E - rank d1) - rank d2.
HomologyRanks z2_homology_ranks(const topogait::SimplicialComplex& s);

/// Plain left-to-right column reduction over the whole filtration, one
/// global boundary matrix, no union-find shortcut. Returns all bars of
/// dimensions 0 and 1 (unsorted multiset).
std::vector<topogait::Bar> reduction_pairing(const topogait::SimplicialComplex& s,
                                             const topogait::Filtration& f);

struct DiagramPoint {
    double birth;
    double death;
};

/// Minimum over all bijections-with-diagonal of the max L-infinity cost,
/// by exhaustive recursion. Intended for point sets of size <= ~7.
double brute_bottleneck(const std::vector<DiagramPoint>& a, const std::vector<DiagramPoint>& b);

/// Random voxel image with at least one cube: dimensions up to max_side,
/// i.i.d. voxel occupancy, retried until a cube exists.
topogait::BinaryImage3D random_voxel_image(std::mt19937_64& rng, int max_side);

}  // namespace oracles
