#pragma once

#include <cstdint>
#include <vector>

#include "ladderkit/model.hpp"

namespace ladderkit {

// ---------------------------------------------------------------------------
// Independent Monte Carlo oracle: exact path simulation over an exponential
// horizon. Deterministic for fixed (model, config) regardless of thread
// count; LADDERKIT_THREADS caps the worker pool.
// ---------------------------------------------------------------------------

struct SimConfig {
    std::int64_t paths = 10000;
    std::uint64_t seed = 1;
    double qRate = 1.0;         ///< horizon e(qRate)
    double level = 1.0;         ///< first-passage level
    bool bridgeSampling = true; ///< exact Brownian segment maxima when true
};

struct SimEstimate {
    double value = 0.0;
    double stdError = 0.0; ///< sample sd / sqrt(n)
    std::int64_t n = 0;
    std::uint64_t seed = 0;
};

struct FirstPassageSim {
    SimEstimate pCross;        ///< P(T+(level) < e(q))
    SimEstimate creepFraction; ///< P(creep crossing), unconditional
    std::vector<double> overshootSamples; ///< one per jump crossing
    RowVector phaseFreq; ///< crossing cause frequencies, 0 = creep, j = phase j
    bool biasWarning = false; ///< set when grid stepping replaced bridges
};

/// Per-path first passage over cfg.level before an independent e(q) horizon:
/// crossing indicator, cause (creep versus jump phase) and overshoot. Between
/// jump epochs the Brownian segment maximum is sampled exactly through the
/// bridge-maximum inverse cdf; with bridgeSampling off a fixed grid of step
/// 1e-3 is used instead and the estimate is biased low (flagged).
FirstPassageSim simulate_first_passage(const PhLevyModel& model,
                                       const SimConfig& cfg);

/// i.i.d. samples of M_{e(q)} = sup of X (or 0) over the horizon, in path
/// order.
std::vector<double> simulate_sup(const PhLevyModel& model,
                                 const SimConfig& cfg);

/// Monte Carlo estimate of E[e^{-aArg (e(q) - G) - b (M - X)_{e(q)}}] where G
/// is the last time the supremum was attained. The argmax inside a Brownian
/// segment is sampled exactly from its inverse-Gaussian mixture law.
SimEstimate simulate_wh4(const PhLevyModel& model, const SimConfig& cfg,
                         double aArg, double b);

// ---------------------------------------------------------------------------
// Deterministic RNG core (splitmix64) with hand-rolled samplers, so that the
// stream is identical across platforms and standard libraries.
// ---------------------------------------------------------------------------

struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    /// uniform on (0,1), never exactly 0
    double uniform() {
        double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }
    double exponential();      ///< mean 1
    double normal();           ///< standard normal, Box-Muller with cache
    double inverse_gaussian(double mu, double lambda);
    /// absorption time of the phase chain (alpha, T); when phases is non-null
    /// the visited phases and their sojourn times are appended to it
    double phase_type(const PhaseType& ph,
                      std::vector<std::pair<int, double>>* phases = nullptr);

    bool hasCachedNormal = false;
    double cachedNormal = 0.0;
};

/// Per-path stream: a fresh generator decorrelated from neighbours by seed
/// scrambling, so path i's draws do not depend on how work was scheduled.
Rng path_rng(std::uint64_t seed, std::int64_t pathIndex);

/// Exact maximum of a Brownian segment from x0 to x1 over dt with variance
/// coefficient sigma2, by the bridge-maximum inverse cdf.
double bridge_maximum(double x0, double x1, double dt, double sigma2, Rng& rng);

/// Exact argmax time (within the segment, in (0, dt)) of the bridge given its
/// maximum, from the two-sided inverse-Gaussian mixture.
double bridge_argmax(double x0, double x1, double vmax, double dt,
                     double sigma2, Rng& rng);

} // namespace ladderkit
