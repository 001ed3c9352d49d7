#include "topogait/signature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <stdexcept>

#include <json.hpp>

namespace topogait {

SignatureConfig::SignatureConfig() : planes(default_planes()) {}

SignatureConfig::SignatureConfig(int n_, std::vector<ReferencePlane> planes_)
    : n(n_), planes(std::move(planes_)) {
    if (n < 1) throw std::invalid_argument("window count must be >= 1");
    if (planes.empty()) throw std::invalid_argument("at least one plane required");
}

bool SignatureConfig::operator==(const SignatureConfig& other) const {
    if (n != other.n || planes.size() != other.planes.size()) return false;
    for (std::size_t i = 0; i < planes.size(); ++i) {
        const auto& a = planes[i];
        const auto& b = other.planes[i];
        if (a.id != b.id || a.offset != b.offset || a.normal.x != b.normal.x ||
            a.normal.y != b.normal.y || a.normal.z != b.normal.z)
            return false;
    }
    return true;
}

SignatureVector signature_vector(const std::vector<Bar>& positive_bars, double k, int n,
                                 WindowMode mode, std::string plane_id, int dim) {
    if (!(k > 0.0)) throw std::invalid_argument("window span k must be positive");
    if (n < 1) throw std::invalid_argument("window count must be >= 1");

    SignatureVector out;
    out.plane_id = std::move(plane_id);
    out.dim = dim;
    out.entries.assign(static_cast<std::size_t>(2) * n, 0);

    const double h = k / n;
    for (const Bar& bar : positive_bars) {
        if (bar.birth < 0.0 || bar.birth > k)
            throw std::invalid_argument("bar birth outside [0, k]");
        // Half-open windows [s*h, (s+1)*h); a birth exactly at k joins the last.
        int window = static_cast<int>(std::floor(bar.birth / h));
        window = std::clamp(window, 0, n - 1);
        out.entries[static_cast<std::size_t>(2) * window + 1] += 1;

        for (int s = window + 1; s < n; ++s) {
            const double start = s * h;
            if (bar.birth >= start) continue;  // guards the boundary window itself
            // Alive at t iff birth <= t < death; a death exactly at the
            // window start counts as already dead there.
            if (mode == WindowMode::Alive && !bar.essential() && bar.death <= start) break;
            out.entries[static_cast<std::size_t>(2) * s] += 1;
        }
    }
    return out;
}

SignaturePipeline gait_pipeline(const SimplicialComplex& s, const SignatureConfig& cfg,
                                WindowMode mode) {
    if (s.vertices.empty()) throw std::invalid_argument("empty complex");

    struct PlaneOutput {
        PersistenceDiagram diagram;
        double k;
        SignatureVector v0, v1;
    };
    auto run_plane = [&](const ReferencePlane& plane) {
        const Filtration filtration = build_filtration(s, plane);
        PersistenceDiagram diagram = compute_persistence(s, filtration);
        const double k = filtration.max_value;
        if (!(k > 0.0))
            throw std::runtime_error("degenerate filtration: complex lies in plane " + plane.id);
        PlaneOutput out;
        out.v0 = signature_vector(barcode(diagram, 0, true), k, cfg.n, mode, plane.id, 0);
        out.v1 = signature_vector(barcode(diagram, 1, true), k, cfg.n, mode, plane.id, 1);
        out.diagram = std::move(diagram);
        out.k = k;
        return out;
    };

    std::vector<std::future<PlaneOutput>> futures;
    futures.reserve(cfg.planes.size());
    for (const auto& plane : cfg.planes)
        futures.push_back(std::async(std::launch::async, run_plane, std::cref(plane)));

    SignaturePipeline result;
    result.signature.config = cfg;
    for (auto& fut : futures) {
        PlaneOutput out = fut.get();
        result.signature.vectors.push_back(std::move(out.v0));
        result.signature.vectors.push_back(std::move(out.v1));
        result.per_plane.push_back({std::move(out.diagram), out.k});
    }
    return result;
}

GaitSignature gait_signature(const SimplicialComplex& s, const SignatureConfig& cfg,
                             WindowMode mode) {
    return gait_pipeline(s, cfg, mode).signature;
}

namespace {

struct ExactDot {
    std::int64_t dot = 0;
    std::int64_t norm_a = 0;
    std::int64_t norm_b = 0;
};

ExactDot exact_dot(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
    ExactDot r;
    for (std::size_t i = 0; i < a.size(); ++i) {
        r.dot += a[i] * b[i];
        r.norm_a += a[i] * a[i];
        r.norm_b += b[i] * b[i];
    }
    return r;
}

// Parallel iff the Cauchy-Schwarz bound is tight; exact in 128 bits.
bool exactly_parallel(const ExactDot& r) {
    return static_cast<__int128>(r.dot) * r.dot ==
           static_cast<__int128>(r.norm_a) * r.norm_b;
}

}  // namespace

double pair_cosine(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    const ExactDot r = exact_dot(a, b);
    if (r.norm_a == 0 && r.norm_b == 0) return 1.0;  // identical absence of features
    if (r.norm_a == 0 || r.norm_b == 0) return 0.0;
    if (r.dot == 0) return 0.0;
    if (exactly_parallel(r)) return 1.0;  // entries are non-negative, so never -1
    const double c =
        static_cast<double>(r.dot) /
        std::sqrt(static_cast<double>(r.norm_a) * static_cast<double>(r.norm_b));
    return std::clamp(c, -1.0, 1.0);
}

double pair_angle_degrees(const std::vector<std::int64_t>& a,
                          const std::vector<std::int64_t>& b) {
    const ExactDot r = exact_dot(a, b);
    if (r.norm_a == 0 && r.norm_b == 0) return 0.0;
    if (r.norm_a == 0 || r.norm_b == 0) return 90.0;
    if (r.dot == 0) return 90.0;
    if (exactly_parallel(r)) return 0.0;
    const double c = std::clamp(
        static_cast<double>(r.dot) /
            std::sqrt(static_cast<double>(r.norm_a) * static_cast<double>(r.norm_b)),
        -1.0, 1.0);
    return std::acos(c) * 180.0 / M_PI;
}

namespace {

void require_same_config(const GaitSignature& a, const GaitSignature& b) {
    if (!(a.config == b.config) || a.vectors.size() != b.vectors.size())
        throw std::invalid_argument("signature configs do not match");
}

}  // namespace

double angle_distance(const GaitSignature& a, const GaitSignature& b) {
    require_same_config(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.vectors.size(); ++i)
        sum += pair_angle_degrees(a.vectors[i].entries, b.vectors[i].entries);
    return sum;
}

double angle_distance_mean(const GaitSignature& a, const GaitSignature& b) {
    require_same_config(a, b);
    if (a.vectors.empty()) return 0.0;
    return angle_distance(a, b) / static_cast<double>(a.vectors.size());
}

double cosine_score(const GaitSignature& a, const GaitSignature& b) {
    require_same_config(a, b);
    if (a.vectors.empty()) return 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < a.vectors.size(); ++i)
        sum += pair_cosine(a.vectors[i].entries, b.vectors[i].entries);
    return sum / static_cast<double>(a.vectors.size());
}

void write_signature(const GaitSignature& sig, const std::filesystem::path& path) {
    nlohmann::ordered_json doc;
    doc["format"] = "topogait-signature";
    doc["version"] = 1;
    doc["n"] = sig.config.n;
    doc["planes"] = nlohmann::ordered_json::array();
    for (const auto& plane : sig.config.planes) {
        nlohmann::ordered_json p;
        p["id"] = plane.id;
        p["normal"] = {plane.normal.x, plane.normal.y, plane.normal.z};
        p["offset"] = plane.offset;
        doc["planes"].push_back(std::move(p));
    }
    doc["vectors"] = nlohmann::ordered_json::array();
    for (const auto& v : sig.vectors) {
        nlohmann::ordered_json entry;
        entry["plane"] = v.plane_id;
        entry["dim"] = v.dim;
        entry["entries"] = v.entries;
        doc["vectors"].push_back(std::move(entry));
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << doc.dump(2) << "\n";
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

GaitSignature read_signature(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open signature");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path.string() + ": invalid JSON: " + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "topogait-signature")
            throw std::runtime_error("unexpected format tag");
        GaitSignature sig;
        sig.config.n = doc.at("n").get<int>();
        sig.config.planes.clear();
        for (const auto& p : doc.at("planes")) {
            ReferencePlane plane;
            plane.id = p.at("id").get<std::string>();
            const auto& n = p.at("normal");
            plane.normal = {n.at(0).get<double>(), n.at(1).get<double>(), n.at(2).get<double>()};
            plane.offset = p.at("offset").get<double>();
            sig.config.planes.push_back(std::move(plane));
        }
        for (const auto& v : doc.at("vectors")) {
            SignatureVector vec;
            vec.plane_id = v.at("plane").get<std::string>();
            vec.dim = v.at("dim").get<int>();
            vec.entries = v.at("entries").get<std::vector<std::int64_t>>();
            if (vec.entries.size() != static_cast<std::size_t>(2) * sig.config.n)
                throw std::runtime_error("vector length does not match n");
            sig.vectors.push_back(std::move(vec));
        }
        if (sig.vectors.size() != 2 * sig.config.planes.size())
            throw std::runtime_error("expected two vectors per plane");
        return sig;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path.string() + ": bad signature file: " + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

}  // namespace topogait
