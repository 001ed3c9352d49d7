#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "topogait/signature.hpp"
#include "topogait/silhouette_io.hpp"

namespace topogait {

/// Synthetic walker: a torso block with two rectangular legs hinged at a
/// hip point, swinging sinusoidally in antiphase.
struct WalkerParams {
    int frame_width = 64;
    int frame_height = 64;
    int leg_length = 28;
    int leg_width = 6;
    double amplitude_deg = 30.0;  // (0, 60]
    int period = 20;              // frames per gait cycle, >= 4
    int cycles = 1;
    double noise_p = 0.0;         // i.i.d. pixel flip probability, [0, 0.2]
    std::uint64_t seed = 0;
    bool bag = false;             // rectangle occluder at hip height

    void validate() const;  // throws std::invalid_argument
};

/// period * cycles frames, deterministic for a given seed.
std::vector<BitGrid> synth_gait(const WalkerParams& params);

/// Binomial lower bound on P(||V - W||_1 <= m) for m_i bars whose births
/// are uniform over [0, k], under filter perturbations of at most
/// epsilon: sum_{j=0..m} C(m_i, j) p^j (1-p)^(m_i-j) with one
/// window-crossing band of mass 2*eps/k per window, p = 2*n*eps/k.
double theoretical_bound(std::int64_t m_i, int n, double eps, double k, std::int64_t m);

/// The bound is meaningful only while the crossing bands stay inside
/// their windows: eps <= k / (2n).
bool epsilon_in_window(double eps, double k, int n);

enum class PerturbModel {
    OneSidedUp,  // endpoint + U[0, eps]
    Symmetric,   // endpoint + U[-eps, eps]
};

enum class BirthModel {
    FixedInput,     // every trial perturbs the given bars
    RedrawUniform,  // every trial first redraws the births uniformly on [0, k]
};

struct StabilityRow {
    std::int64_t m = 0;
    double empirical = 0.0;    // fraction of trials with ||V - W||_1 <= m
    double theoretical = 0.0;  // binomial bound
    double threshold = 0.0;    // theoretical - 3 binomial standard errors
    bool pass = false;         // empirical >= threshold
};

struct StabilityReport {
    double epsilon = 0.0;
    double k = 0.0;
    int n = 0;
    std::int64_t bar_count = 0;  // m_i
    std::int64_t trials = 0;
    bool epsilon_valid = true;
    PerturbModel model = PerturbModel::OneSidedUp;
    BirthModel births = BirthModel::FixedInput;
    std::vector<StabilityRow> rows;  // m = 0 .. m_i
};

/// Monte Carlo check of the stability bound: per trial, shifts every bar
/// endpoint by an independent draw from the perturbation model,
/// recomputes the birth-window counts (the odd vector entries) and
/// records the L1 change. With RedrawUniform the births themselves are
/// part of each trial, which is the sampling the binomial bound models;
/// FixedInput conditions on the given bars instead. Throws if eps is
/// outside the validity window.
StabilityReport perturb_and_compare(const std::vector<Bar>& bars, double k, int n, double eps,
                                    std::int64_t trials, std::uint64_t seed,
                                    PerturbModel model = PerturbModel::OneSidedUp,
                                    BirthModel births = BirthModel::FixedInput);

/// m_i bars with births uniform on [0, k] (deterministic per seed);
/// deaths are essential so every bar is positive-length.
std::vector<Bar> uniform_birth_bars(std::int64_t count, double k, std::uint64_t seed);

/// Plain-text report table and its machine-readable JSON twin.
void write_stability_report(const StabilityReport& report, std::ostream& out);
std::string stability_report_json(const StabilityReport& report);

struct CycleInvarianceResult {
    double cosine = 0.0;
    double angle = 0.0;
};

/// Compares the 1-cycle prefix of a walker sequence against the full
/// multi-cycle sequence: same walker, same planes. Requires cycles >= 2.
CycleInvarianceResult cycle_invariance(const WalkerParams& params,
                                       const SignatureConfig& cfg = SignatureConfig{},
                                       const StackOptions& stack_options = {});

}  // namespace topogait
