#include "topogait/synthlab.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace topogait {

namespace {

// splitmix64: cheap, well-mixed per-stream seeding.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(mix(seed ^ mix(stream)));
}

struct LegShape {
    double hip_x, hip_y;   // hinge point, image coordinates (y grows downward)
    double dir_x, dir_y;   // unit direction from hip toward the foot
    double length, width;

    bool covers(double px, double py) const {
        const double rx = px - hip_x;
        const double ry = py - hip_y;
        const double along = rx * dir_x + ry * dir_y;
        const double across = rx * -dir_y + ry * dir_x;
        return along >= 0.0 && along <= length && std::abs(across) <= width / 2.0;
    }
};

}  // namespace

void WalkerParams::validate() const {
    if (frame_width < 8 || frame_height < 8)
        throw std::invalid_argument("frame must be at least 8x8");
    if (leg_length < 2 || leg_width < 1) throw std::invalid_argument("legs too small");
    if (!(amplitude_deg > 0.0 && amplitude_deg <= 60.0))
        throw std::invalid_argument("amplitude must be in (0, 60] degrees");
    if (period < 4) throw std::invalid_argument("period must be >= 4");
    if (cycles < 1) throw std::invalid_argument("cycles must be >= 1");
    if (!(noise_p >= 0.0 && noise_p <= 0.2))
        throw std::invalid_argument("noise probability must be in [0, 0.2]");
}

std::vector<BitGrid> synth_gait(const WalkerParams& p) {
    p.validate();

    const int frame_count = p.period * p.cycles;
    const double hip_x = p.frame_width / 2.0;
    const int torso_h = p.leg_length;  // legs occupy roughly the lower half
    const int torso_w = std::max(3 * p.leg_width, p.leg_width + 4);
    const double hip_y = std::max(2, p.frame_height - 2 - p.leg_length);
    const double amplitude = p.amplitude_deg * M_PI / 180.0;

    std::vector<BitGrid> frames;
    frames.reserve(frame_count);
    for (int t = 0; t < frame_count; ++t) {
        BitGrid frame(p.frame_width, p.frame_height);

        const double phase = 2.0 * M_PI * t / p.period;
        LegShape legs[2];
        for (int j = 0; j < 2; ++j) {
            const double theta = amplitude * std::sin(phase + j * M_PI);
            legs[j] = {hip_x, hip_y, std::sin(theta), std::cos(theta),
                       static_cast<double>(p.leg_length), static_cast<double>(p.leg_width)};
        }

        const int torso_top = std::max(0, static_cast<int>(hip_y) - torso_h);
        const int torso_left = static_cast<int>(hip_x) - torso_w / 2;
        for (int y = 0; y < p.frame_height; ++y) {
            for (int x = 0; x < p.frame_width; ++x) {
                const bool in_torso = y >= torso_top && y <= static_cast<int>(hip_y) &&
                                      x >= torso_left && x < torso_left + torso_w;
                const double cx = x + 0.5, cy = y + 0.5;
                if (in_torso || legs[0].covers(cx, cy) || legs[1].covers(cx, cy))
                    frame.set(x, y, true);
            }
        }

        if (p.bag) {
            // Carried-object occluder: a block hanging at hip height beside
            // the torso, reaching slightly into the leg region.
            const int bag_w = std::max(4, torso_w / 2);
            const int bag_top = static_cast<int>(hip_y) - torso_h / 3;
            const int bag_bottom = std::min(p.frame_height - 1,
                                            static_cast<int>(hip_y) + p.leg_length / 4);
            const int bag_left = torso_left + torso_w;
            for (int y = std::max(0, bag_top); y <= bag_bottom; ++y)
                for (int x = std::max(0, bag_left);
                     x < std::min(p.frame_width, bag_left + bag_w); ++x)
                    frame.set(x, y, true);
        }

        if (p.noise_p > 0.0) {
            auto rng = stream_rng(p.seed, static_cast<std::uint64_t>(t));
            std::bernoulli_distribution flip(p.noise_p);
            for (auto& bit : frame.bits)
                if (flip(rng)) bit = bit ? 0 : 1;
        }
        frames.push_back(std::move(frame));
    }
    return frames;
}

bool epsilon_in_window(double eps, double k, int n) {
    return eps <= k / (2.0 * n);
}

double theoretical_bound(std::int64_t m_i, int n, double eps, double k, std::int64_t m) {
    if (m_i < 0 || n < 1 || !(k > 0.0) || eps < 0.0)
        throw std::invalid_argument("invalid bound parameters");
    if (m < 0 || m > m_i) throw std::invalid_argument("m must lie in [0, m_i]");

    const double p = 2.0 * n * eps / k;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return m >= m_i ? 1.0 : 0.0;

    // Sum the binomial CDF in log space; m_i stays small enough for this
    // to be exact to well below the 1e-6 the callers need.
    double total = 0.0;
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    for (std::int64_t j = 0; j <= m; ++j) {
        const double log_choose = std::lgamma(static_cast<double>(m_i) + 1.0) -
                                  std::lgamma(static_cast<double>(j) + 1.0) -
                                  std::lgamma(static_cast<double>(m_i - j) + 1.0);
        total += std::exp(log_choose + j * log_p + (m_i - j) * log_q);
    }
    return std::min(total, 1.0);
}

std::vector<Bar> uniform_birth_bars(std::int64_t count, double k, std::uint64_t seed) {
    if (count < 0 || !(k > 0.0)) throw std::invalid_argument("invalid bar parameters");
    auto rng = stream_rng(seed, 0x62617273ull);
    std::uniform_real_distribution<double> birth(0.0, k);
    std::vector<Bar> bars;
    bars.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) bars.push_back({0, birth(rng), kEssential});
    return bars;
}

StabilityReport perturb_and_compare(const std::vector<Bar>& bars, double k, int n, double eps,
                                    std::int64_t trials, std::uint64_t seed,
                                    PerturbModel model, BirthModel births) {
    if (!(k > 0.0) || n < 1) throw std::invalid_argument("invalid window parameters");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!epsilon_in_window(eps, k, n))
        throw std::invalid_argument("epsilon above k/(2n): bound not applicable");

    const double h = k / n;
    const auto window_of = [&](double birth) {
        return std::clamp(static_cast<int>(std::floor(birth / h)), 0, n - 1);
    };

    std::vector<double> fixed_births;
    fixed_births.reserve(bars.size());
    for (const Bar& bar : bars) {
        if (bar.birth < 0.0 || bar.birth > k)
            throw std::invalid_argument("bar birth outside [0, k]");
        fixed_births.push_back(bar.birth);
    }

    const auto m_i = static_cast<std::int64_t>(bars.size());
    std::vector<std::int64_t> at_most(static_cast<std::size_t>(m_i) + 1, 0);

    std::vector<double> trial_births = fixed_births;
    std::vector<std::int64_t> baseline(static_cast<std::size_t>(n), 0);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        auto rng = stream_rng(seed, static_cast<std::uint64_t>(trial) + 1);
        std::uniform_real_distribution<double> shift =
            model == PerturbModel::OneSidedUp
                ? std::uniform_real_distribution<double>(0.0, eps)
                : std::uniform_real_distribution<double>(-eps, eps);

        if (births == BirthModel::RedrawUniform) {
            std::uniform_real_distribution<double> birth_draw(0.0, k);
            for (double& b : trial_births) b = birth_draw(rng);
        }
        std::fill(baseline.begin(), baseline.end(), 0);
        std::fill(counts.begin(), counts.end(), 0);
        for (const double b : trial_births) {
            baseline[static_cast<std::size_t>(window_of(b))] += 1;
            const double moved = b + shift(rng);
            shift(rng);  // the death endpoint moves too; birth windows ignore it
            counts[static_cast<std::size_t>(window_of(moved))] += 1;
        }
        std::int64_t l1 = 0;
        for (int w = 0; w < n; ++w) l1 += std::abs(counts[w] - baseline[w]);
        if (l1 <= m_i) at_most[static_cast<std::size_t>(l1)] += 1;
    }
    for (std::size_t m = 1; m < at_most.size(); ++m) at_most[m] += at_most[m - 1];

    StabilityReport report;
    report.epsilon = eps;
    report.k = k;
    report.n = n;
    report.bar_count = m_i;
    report.trials = trials;
    report.epsilon_valid = epsilon_in_window(eps, k, n);
    report.model = model;
    report.births = births;
    for (std::int64_t m = 0; m <= m_i; ++m) {
        StabilityRow row;
        row.m = m;
        row.empirical = static_cast<double>(at_most[static_cast<std::size_t>(m)]) /
                        static_cast<double>(trials);
        row.theoretical = theoretical_bound(m_i, n, eps, k, m);
        const double se =
            std::sqrt(row.theoretical * (1.0 - row.theoretical) / static_cast<double>(trials));
        row.threshold = row.theoretical - 3.0 * se;
        row.pass = row.empirical >= row.threshold;
        report.rows.push_back(row);
    }
    return report;
}

void write_stability_report(const StabilityReport& report, std::ostream& out) {
    char line[192];
    std::snprintf(line, sizeof(line),
                  "stability: bars=%lld n=%d epsilon=%.6f k=%.6f trials=%lld model=%s births=%s%s\n",
                  static_cast<long long>(report.bar_count), report.n, report.epsilon, report.k,
                  static_cast<long long>(report.trials),
                  report.model == PerturbModel::OneSidedUp ? "one-sided" : "symmetric",
                  report.births == BirthModel::RedrawUniform ? "redrawn" : "fixed",
                  report.epsilon_valid ? "" : " (epsilon outside validity window)");
    out << line;
    out << "m empirical theoretical margin verdict\n";
    for (const auto& row : report.rows) {
        std::snprintf(line, sizeof(line), "%lld %.6f %.10f %.10f %s\n",
                      static_cast<long long>(row.m), row.empirical, row.theoretical,
                      row.threshold, row.pass ? "pass" : "FAIL");
        out << line;
    }
}

std::string stability_report_json(const StabilityReport& report) {
    nlohmann::ordered_json doc;
    doc["bars"] = report.bar_count;
    doc["n"] = report.n;
    doc["epsilon"] = report.epsilon;
    doc["k"] = report.k;
    doc["trials"] = report.trials;
    doc["epsilon_valid"] = report.epsilon_valid;
    doc["model"] = report.model == PerturbModel::OneSidedUp ? "one-sided" : "symmetric";
    doc["births"] = report.births == BirthModel::RedrawUniform ? "redrawn" : "fixed";
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json r;
        r["m"] = row.m;
        r["empirical"] = row.empirical;
        r["theoretical"] = row.theoretical;
        r["margin"] = row.threshold;
        r["pass"] = row.pass;
        doc["rows"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

CycleInvarianceResult cycle_invariance(const WalkerParams& params, const SignatureConfig& cfg,
                                       const StackOptions& stack_options) {
    if (params.cycles < 2) throw std::invalid_argument("cycle comparison needs cycles >= 2");

    const std::vector<BitGrid> frames = synth_gait(params);
    const std::vector<BitGrid> one_cycle(frames.begin(), frames.begin() + params.period);

    const auto signature_of = [&](const std::vector<BitGrid>& fs) {
        const BinaryImage3D image = stack_frames(fs, stack_options);
        const SimplicialComplex surface = boundary_surface(build_cubical(image), image);
        return gait_signature(surface, cfg);
    };

    const GaitSignature full = signature_of(frames);
    const GaitSignature prefix = signature_of(one_cycle);
    return {cosine_score(prefix, full), angle_distance(prefix, full)};
}

}  // namespace topogait
