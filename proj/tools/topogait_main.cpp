// Command-line front end: signature extraction, comparison, gallery
// ranking, diagram export, bottleneck distance, synthetic walkers and the
// stability / cycle experiments.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topogait/bottleneck.hpp"
#include "topogait/complex.hpp"
#include "topogait/filtration.hpp"
#include "topogait/persistence.hpp"
#include "topogait/signature.hpp"
#include "topogait/silhouette_io.hpp"
#include "topogait/synthlab.hpp"

namespace {

using namespace topogait;

struct PipelineFlags {
    bool legs = false;
    bool full = false;
    double fraction = 0.25;
    std::string align = "left";
    int n = 24;
    std::string planes = "default";
    std::string window_mode = "alive";
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& flags) {
    auto* legs = cmd->add_flag("--legs", flags.legs, "crop each frame to its lowest fraction");
    cmd->add_flag("--full", flags.full, "use the whole silhouette (default)")->excludes(legs);
    cmd->add_option("--fraction", flags.fraction, "crop fraction in (0, 1]")
        ->default_val(0.25);
    cmd->add_option("--align", flags.align, "horizontal registration of frames")
        ->check(CLI::IsMember({"left", "center"}))
        ->default_val("left");
    cmd->add_option("--n", flags.n, "windows per barcode")->default_val(24);
    cmd->add_option("--planes", flags.planes, "plane set: default, depth, or a config path")
        ->envname("TOPOGAIT_PLANES")
        ->default_val("default");
    cmd->add_option("--window-mode", flags.window_mode, "even-entry semantics")
        ->check(CLI::IsMember({"alive", "literal"}))
        ->default_val("alive");
}

StackOptions stack_options_of(const PipelineFlags& flags) {
    StackOptions options;
    options.legs = flags.legs;
    options.fraction = flags.fraction;
    options.align = flags.align == "center" ? HorizontalAlign::Center : HorizontalAlign::Left;
    return options;
}

WindowMode window_mode_of(const PipelineFlags& flags) {
    return flags.window_mode == "literal" ? WindowMode::Literal : WindowMode::Alive;
}

SimplicialComplex surface_from_dir(const std::filesystem::path& dir,
                                   const PipelineFlags& flags) {
    const std::vector<BitGrid> frames = load_frame_dir(dir);
    const BinaryImage3D image = stack_frames(frames, stack_options_of(flags));
    return boundary_surface(build_cubical(image), image);
}

struct ManifestEntry {
    std::string label;
    std::filesystem::path path;
};

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open index");
    const std::filesystem::path base = path.parent_path();
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::string label, file;
        if (!(fields >> label >> file))
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected 'label path'");
        std::filesystem::path p(file);
        entries.push_back({label, p.is_absolute() ? p : base / p});
    }
    if (entries.empty()) throw std::runtime_error(path.string() + ": empty index");
    std::map<std::string, int> seen;
    for (const auto& e : entries)
        if (++seen[e.label] > 1)
            throw std::runtime_error(path.string() + ": duplicate label '" + e.label + "'");
    return entries;
}

struct LoadedEntry {
    std::string label;
    GaitSignature signature;
};

std::vector<LoadedEntry> load_signatures(const std::vector<ManifestEntry>& entries) {
    std::vector<std::future<GaitSignature>> futures;
    futures.reserve(entries.size());
    for (const auto& e : entries)
        futures.push_back(std::async(std::launch::async,
                                     [&e] { return read_signature(e.path); }));
    std::vector<LoadedEntry> out;
    out.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        out.push_back({entries[i].label, futures[i].get()});
    for (const auto& e : out)
        if (!(e.signature.config == out.front().signature.config))
            throw std::runtime_error("index signatures do not share one config ('" + e.label +
                                     "' differs)");
    return out;
}

void print_scalar(double v) { std::printf("%.6f\n", v); }

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int run_signature(const std::filesystem::path& dir, const PipelineFlags& flags,
                  const std::filesystem::path& output) {
    const SimplicialComplex surface = surface_from_dir(dir, flags);
    const SignatureConfig cfg(flags.n, resolve_planes(flags.planes));
    const SignaturePipeline pipeline = gait_pipeline(surface, cfg, window_mode_of(flags));
    for (const auto& plane : pipeline.per_plane)
        std::printf("plane %s m0 %lld m1 %lld\n", plane.diagram.label.c_str(),
                    static_cast<long long>(plane.diagram.m0),
                    static_cast<long long>(plane.diagram.m1));
    write_signature(pipeline.signature, output);
    return 0;
}

int run_compare(const std::filesystem::path& a_path, const std::filesystem::path& b_path,
                const std::string& metric) {
    const GaitSignature a = read_signature(a_path);
    const GaitSignature b = read_signature(b_path);
    if (metric == "cosine")
        print_scalar(cosine_score(a, b));
    else if (metric == "angle-mean")
        print_scalar(angle_distance_mean(a, b));
    else
        print_scalar(angle_distance(a, b));
    return 0;
}

int run_rank(const std::filesystem::path& probe_path, const std::filesystem::path& index_path,
             const std::string& metric) {
    const GaitSignature probe = read_signature(probe_path);
    const std::vector<LoadedEntry> gallery = load_signatures(load_manifest(index_path));
    if (!(probe.config == gallery.front().signature.config))
        throw std::runtime_error("probe config does not match the gallery");

    struct Scored {
        const LoadedEntry* entry;
        double value;  // ascending = better
    };
    std::vector<Scored> scored;
    scored.reserve(gallery.size());
    for (const auto& e : gallery) {
        const double v = metric == "cosine" ? -cosine_score(probe, e.signature)
                                            : angle_distance(probe, e.signature);
        scored.push_back({&e, v});
    }
    // Ties keep the gallery-file order.
    std::stable_sort(scored.begin(), scored.end(),
                     [](const Scored& a, const Scored& b) { return a.value < b.value; });
    for (const auto& s : scored)
        std::printf("%s %.6f\n", s.entry->label.c_str(),
                    metric == "cosine" ? -s.value : s.value);
    return 0;
}

int run_tpn(const std::filesystem::path& gallery_path, const std::filesystem::path& probes_path,
            int resolution) {
    if (resolution < 1) throw std::runtime_error("resolution must be >= 1");
    const std::vector<LoadedEntry> gallery = load_signatures(load_manifest(gallery_path));
    const std::vector<LoadedEntry> probes = load_signatures(load_manifest(probes_path));
    if (!(gallery.front().signature.config == probes.front().signature.config))
        throw std::runtime_error("gallery and probe configs do not match");

    std::vector<double> tp, tn;
    for (const auto& probe : probes) {
        bool matched = false;
        for (const auto& entry : gallery) {
            const double d = angle_distance(probe.signature, entry.signature);
            if (entry.label == probe.label) {
                tp.push_back(d);
                matched = true;
            } else {
                tn.push_back(d);
            }
        }
        if (!matched)
            throw std::runtime_error("probe label '" + probe.label + "' not in the gallery");
    }
    // Balance the sets: keep only the |TP| smallest different-person values.
    std::sort(tn.begin(), tn.end());
    if (tn.size() > tp.size()) tn.resize(tp.size());

    double hi = 0.0;
    for (double v : tp) hi = std::max(hi, v);
    for (double v : tn) hi = std::max(hi, v);

    const auto percent_below = [](const std::vector<double>& values, double threshold) {
        if (values.empty()) return 0.0;
        const auto c = std::count_if(values.begin(), values.end(),
                                     [threshold](double v) { return v <= threshold; });
        return 100.0 * static_cast<double>(c) / static_cast<double>(values.size());
    };

    std::printf("threshold tp_percent tn_percent\n");
    for (int i = 0; i <= resolution; ++i) {
        const double t = hi * static_cast<double>(i) / resolution;
        std::printf("%.6f %.6f %.6f\n", t, percent_below(tp, t), percent_below(tn, t));
    }
    return 0;
}

int run_barcode(const std::filesystem::path& dir, const PipelineFlags& flags,
                const std::string& plane_id, const std::filesystem::path& output, int dim,
                bool positive_only) {
    const SimplicialComplex surface = surface_from_dir(dir, flags);
    const std::vector<ReferencePlane> planes = resolve_planes(flags.planes);
    const auto it = std::find_if(planes.begin(), planes.end(), [&](const ReferencePlane& p) {
        return plane_id.empty() || p.id == plane_id;
    });
    if (it == planes.end())
        throw std::runtime_error("plane '" + plane_id + "' is not in the plane set");

    const PersistenceDiagram diagram = compute_persistence(surface, build_filtration(surface, *it));
    if (!output.empty()) {
        write_diagram(diagram, output);
        return 0;
    }
    for (const Bar& b : barcode(diagram, dim, positive_only)) {
        if (b.essential())
            std::printf("%d %.6f inf\n", b.dim, b.birth);
        else
            std::printf("%d %.6f %.6f\n", b.dim, b.birth, b.death);
    }
    return 0;
}

int run_bottleneck(const std::filesystem::path& a_path, const std::filesystem::path& b_path,
                   int dim) {
    const PersistenceDiagram a = read_diagram(a_path);
    const PersistenceDiagram b = read_diagram(b_path);
    const BottleneckResult r = bottleneck(a, b, dim);
    if (r.essential_mismatch) {
        std::fprintf(stderr,
                     "note: essential class counts differ in dimension %d; "
                     "distance is infinite\n",
                     dim);
        std::printf("inf\n");
    } else {
        print_scalar(r.value);
    }
    return 0;
}

int run_synth(const WalkerParams& params, const std::filesystem::path& out_dir) {
    const std::vector<BitGrid> frames = synth_gait(params);
    std::filesystem::create_directories(out_dir);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%04zu.pgm", i);
        save_pgm(frames[i], out_dir / name);
    }
    std::printf("wrote %zu frames to %s\n", frames.size(), out_dir.string().c_str());
    return 0;
}

struct StabilityFlags {
    std::int64_t m0 = 50;
    int n = 24;
    double epsilon = 0.001;
    double k = 0.9;
    std::int64_t trials = 10000;
    std::uint64_t seed = 1;
    std::string model = "one-sided";
    std::string births = "";
    std::string diagram_path;
    int dim = 0;
    std::string json_path;
};

int run_stability(const StabilityFlags& flags) {
    std::vector<Bar> bars;
    double k = flags.k;
    // Synthetic runs redraw the births each trial (that is the sampling
    // the binomial bound describes); diagram runs keep the real bars.
    BirthModel births = BirthModel::RedrawUniform;
    if (!flags.diagram_path.empty()) {
        const PersistenceDiagram d = read_diagram(flags.diagram_path);
        bars = barcode(d, flags.dim, true);
        k = d.max_filter_value();
        if (bars.empty()) throw std::runtime_error("diagram has no positive bars in that dimension");
        births = BirthModel::FixedInput;
    } else {
        bars = uniform_birth_bars(flags.m0, k, flags.seed);
    }
    if (flags.births == "fixed") births = BirthModel::FixedInput;
    if (flags.births == "redraw") births = BirthModel::RedrawUniform;
    const PerturbModel model =
        flags.model == "symmetric" ? PerturbModel::Symmetric : PerturbModel::OneSidedUp;
    const StabilityReport report = perturb_and_compare(bars, k, flags.n, flags.epsilon,
                                                       flags.trials, flags.seed, model, births);
    write_stability_report(report, std::cout);
    if (!flags.json_path.empty()) {
        std::ofstream out(flags.json_path);
        if (!out) throw std::runtime_error(flags.json_path + ": cannot open for writing");
        out << stability_report_json(report);
    }
    return 0;
}

int run_cycles(const WalkerParams& params, const PipelineFlags& flags) {
    const SignatureConfig cfg(flags.n, resolve_planes(flags.planes));
    const CycleInvarianceResult r = cycle_invariance(params, cfg, stack_options_of(flags));
    std::printf("cosine %.6f\n", r.cosine);
    std::printf("angle %.6f\n", r.angle);
    return 0;
}

void add_walker_flags(CLI::App* cmd, WalkerParams& params) {
    cmd->add_option("--width", params.frame_width)->default_val(64);
    cmd->add_option("--height", params.frame_height)->default_val(64);
    cmd->add_option("--leg-length", params.leg_length)->default_val(28);
    cmd->add_option("--leg-width", params.leg_width)->default_val(6);
    cmd->add_option("--amplitude", params.amplitude_deg, "swing amplitude in degrees")
        ->default_val(30.0);
    cmd->add_option("--period", params.period, "frames per gait cycle")->default_val(20);
    cmd->add_option("--cycles", params.cycles)->default_val(1);
    cmd->add_option("--noise", params.noise_p, "pixel flip probability")->default_val(0.0);
    cmd->add_option("--seed", params.seed)->default_val(0);
    cmd->add_flag("--bag", params.bag, "add a carried-object occluder");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topological gait signatures from silhouette sequences"};
    app.require_subcommand(1);

    // signature
    auto* sig_cmd = app.add_subcommand("signature", "extract a signature from a frame directory");
    std::filesystem::path sig_dir, sig_out;
    PipelineFlags sig_flags;
    sig_cmd->add_option("input", sig_dir, "directory of .pgm/.pbm frames")->required();
    sig_cmd->add_option("-o,--output", sig_out, "signature file to write")->required();
    add_pipeline_flags(sig_cmd, sig_flags);

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "compare two signature files");
    std::filesystem::path cmp_a, cmp_b;
    std::string cmp_metric = "angle";
    cmp_cmd->add_option("a", cmp_a)->required();
    cmp_cmd->add_option("b", cmp_b)->required();
    cmp_cmd->add_option("--metric", cmp_metric)
        ->check(CLI::IsMember({"angle", "angle-mean", "cosine"}))
        ->default_val("angle");

    // rank
    auto* rank_cmd = app.add_subcommand("rank", "rank a gallery against a probe signature");
    std::filesystem::path rank_probe, rank_index;
    std::string rank_metric = "angle";
    rank_cmd->add_option("probe", rank_probe)->required();
    rank_cmd->add_option("gallery", rank_index, "text index: one 'label path' per line")
        ->required();
    rank_cmd->add_option("--metric", rank_metric)
        ->check(CLI::IsMember({"angle", "cosine"}))
        ->default_val("angle");

    // tpn-curve
    auto* tpn_cmd = app.add_subcommand("tpn-curve", "true-positive / true-negative curve");
    std::filesystem::path tpn_gallery, tpn_probes;
    int tpn_resolution = 100;
    tpn_cmd->add_option("gallery", tpn_gallery)->required();
    tpn_cmd->add_option("probes", tpn_probes, "probe index with ground-truth labels")->required();
    tpn_cmd->add_option("--resolution", tpn_resolution, "number of threshold steps")
        ->default_val(100);

    // barcode
    auto* bar_cmd = app.add_subcommand("barcode", "persistence diagram for one plane");
    std::filesystem::path bar_dir, bar_out;
    PipelineFlags bar_flags;
    std::string bar_plane;
    int bar_dim = 0;
    bool bar_positive = false;
    bar_cmd->add_option("input", bar_dir, "directory of frames")->required();
    bar_cmd->add_option("--plane", bar_plane, "plane id (default: first of the set)");
    bar_cmd->add_option("-o,--output", bar_out, "write the full diagram file here");
    bar_cmd->add_option("--dim", bar_dim, "dimension printed to stdout")
        ->check(CLI::IsMember({0, 1}))
        ->default_val(0);
    bar_cmd->add_flag("--positive-only", bar_positive, "drop zero-length bars when printing");
    add_pipeline_flags(bar_cmd, bar_flags);

    // bottleneck
    auto* btl_cmd = app.add_subcommand("bottleneck", "bottleneck distance of two diagram files");
    std::filesystem::path btl_a, btl_b;
    int btl_dim = 0;
    btl_cmd->add_option("a", btl_a)->required();
    btl_cmd->add_option("b", btl_b)->required();
    btl_cmd->add_option("--dim", btl_dim)->check(CLI::IsMember({0, 1}))->default_val(0);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic walker sequence");
    WalkerParams synth_params;
    std::filesystem::path synth_out;
    add_walker_flags(synth_cmd, synth_params);
    synth_cmd->add_option("-o,--output", synth_out, "output directory")->required();

    // stability
    auto* stab_cmd = app.add_subcommand("stability", "Monte Carlo check of the stability bound");
    StabilityFlags stab_flags;
    stab_cmd->add_option("--m0", stab_flags.m0, "synthetic bar count")->default_val(50);
    stab_cmd->add_option("--n", stab_flags.n)->default_val(24);
    stab_cmd->add_option("--epsilon", stab_flags.epsilon)->default_val(0.001);
    stab_cmd->add_option("--k", stab_flags.k, "window span")->default_val(0.9);
    stab_cmd->add_option("--trials", stab_flags.trials)->default_val(10000);
    stab_cmd->add_option("--seed", stab_flags.seed)->default_val(1);
    stab_cmd->add_option("--model", stab_flags.model)
        ->check(CLI::IsMember({"one-sided", "symmetric"}))
        ->default_val("one-sided");
    stab_cmd->add_option("--births", stab_flags.births,
                         "redraw births per trial or keep them fixed")
        ->check(CLI::IsMember({"fixed", "redraw"}));
    stab_cmd->add_option("--diagram", stab_flags.diagram_path,
                         "draw bars from a diagram file instead of uniform births");
    stab_cmd->add_option("--dim", stab_flags.dim)->check(CLI::IsMember({0, 1}))->default_val(0);
    stab_cmd->add_option("--json", stab_flags.json_path, "also write a JSON report");

    // cycles
    auto* cyc_cmd = app.add_subcommand("cycles", "1-cycle vs multi-cycle signature comparison");
    WalkerParams cyc_params;
    PipelineFlags cyc_flags;
    add_walker_flags(cyc_cmd, cyc_params);
    add_pipeline_flags(cyc_cmd, cyc_flags);
    cyc_cmd->get_option("--cycles")->default_val(2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(sig_cmd)) return run_signature(sig_dir, sig_flags, sig_out);
        if (app.got_subcommand(cmp_cmd)) return run_compare(cmp_a, cmp_b, cmp_metric);
        if (app.got_subcommand(rank_cmd)) return run_rank(rank_probe, rank_index, rank_metric);
        if (app.got_subcommand(tpn_cmd)) return run_tpn(tpn_gallery, tpn_probes, tpn_resolution);
        if (app.got_subcommand(bar_cmd))
            return run_barcode(bar_dir, bar_flags, bar_plane, bar_out, bar_dim, bar_positive);
        if (app.got_subcommand(btl_cmd)) return run_bottleneck(btl_a, btl_b, btl_dim);
        if (app.got_subcommand(synth_cmd)) return run_synth(synth_params, synth_out);
        if (app.got_subcommand(stab_cmd)) return run_stability(stab_flags);
        if (app.got_subcommand(cyc_cmd)) return run_cycles(cyc_params, cyc_flags);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
