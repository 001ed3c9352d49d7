#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "topogait/bottleneck.hpp"
#include "topogait/persistence.hpp"

namespace topogait {

struct SignatureConfig {
    int n = 24;                          // windows per barcode
    std::vector<ReferencePlane> planes;  // defaults to default_planes()

    SignatureConfig();
    SignatureConfig(int n_, std::vector<ReferencePlane> planes_);
    bool operator==(const SignatureConfig&) const;
};

/// Even entries (2s) count classes alive when window s opens, odd entries
/// (2s+1) count births inside window s. Literal mode drops the death
/// condition from the even entries.
enum class WindowMode { Alive, Literal };

struct SignatureVector {
    std::string plane_id;
    int dim = 0;
    std::vector<std::int64_t> entries;  // length 2n
};

struct GaitSignature {
    SignatureConfig config;
    std::vector<SignatureVector> vectors;  // planes in config order, dim 0 before dim 1
};

/// Windowed counting vector of a positive-length barcode over [0, k]
/// split into n windows of width k/n. A birth exactly at k falls in the
/// last window; in Alive mode a class is alive at t iff birth <= t < death.
SignatureVector signature_vector(const std::vector<Bar>& positive_bars, double k, int n,
                                 WindowMode mode = WindowMode::Alive,
                                 std::string plane_id = {}, int dim = 0);

struct PlanePipelineResult {
    PersistenceDiagram diagram;
    double k = 0.0;  // that filtration's own max vertex distance
};

struct SignaturePipeline {
    GaitSignature signature;
    std::vector<PlanePipelineResult> per_plane;  // config order
};

/// Full per-plane pipeline: filtration, persistence, positive barcodes,
/// two vectors per plane. Planes run concurrently and join in config order.
SignaturePipeline gait_pipeline(const SimplicialComplex& s, const SignatureConfig& cfg,
                                WindowMode mode = WindowMode::Alive);

GaitSignature gait_signature(const SimplicialComplex& s, const SignatureConfig& cfg,
                             WindowMode mode = WindowMode::Alive);

/// Angle between two integer vectors in degrees. Orthogonality and
/// parallelism are decided in exact integer arithmetic so that identical
/// vectors give exactly 0 and orthogonal ones exactly 90.
/// Both zero: 0 degrees; exactly one zero: 90 degrees.
double pair_angle_degrees(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b);

/// Cosine similarity counterpart (both zero: 1; one zero: 0).
double pair_cosine(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b);

/// Sum over all vector pairs of the angle in degrees; range [0, 90 * pairs].
double angle_distance(const GaitSignature& a, const GaitSignature& b);

/// angle_distance divided by the number of vector pairs.
double angle_distance_mean(const GaitSignature& a, const GaitSignature& b);

/// Mean cosine similarity over all vector pairs, in [0, 1] for count data.
double cosine_score(const GaitSignature& a, const GaitSignature& b);

/// JSON signature file: config block then the labeled integer arrays, in
/// byte-stable order (planes in config order, dim 0 before dim 1).
void write_signature(const GaitSignature& sig, const std::filesystem::path& path);
GaitSignature read_signature(const std::filesystem::path& path);

}  // namespace topogait
