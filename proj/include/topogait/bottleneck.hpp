#pragma once

#include "topogait/persistence.hpp"

namespace topogait {

struct BottleneckResult {
    double value = 0.0;
    /// Set when the two diagrams carry different numbers of essential
    /// bars in the requested dimension; value is then infinite.
    bool essential_mismatch = false;
};

/// Bottleneck distance between two diagrams restricted to one dimension:
/// minimum over bijections (points may map to the diagonal) of the
/// maximum L-infinity displacement. Computed exactly by binary search
/// over the candidate distances with a bipartite-matching feasibility
/// test. Essential bars match only essential bars.
BottleneckResult bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim);

inline double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                  int dim) {
    return bottleneck(a, b, dim).value;
}

}  // namespace topogait
