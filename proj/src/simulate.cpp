#include "ladderkit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "ladderkit/errors.hpp"

namespace ladderkit {

// ---------------------------------------------------------------------------
// RNG samplers
// ---------------------------------------------------------------------------

double Rng::exponential() { return -std::log(uniform()); }

double Rng::normal() {
    if (hasCachedNormal) {
        hasCachedNormal = false;
        return cachedNormal;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double twoPi = 6.283185307179586476925286766559;
    cachedNormal = r * std::sin(twoPi * u2);
    hasCachedNormal = true;
    return r * std::cos(twoPi * u2);
}

double Rng::inverse_gaussian(double mu, double lambda) {
    const double nu = normal();
    const double y = nu * nu;
    double x = mu + mu * mu * y / (2.0 * lambda) -
               (mu / (2.0 * lambda)) *
                   std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
    if (x <= 0.0) x = std::numeric_limits<double>::min();
    const double u = uniform();
    return u <= mu / (mu + x) ? x : mu * mu / x;
}

double Rng::phase_type(const PhaseType& ph,
                       std::vector<std::pair<int, double>>* phases) {
    const int m = ph.order();
    double u = uniform();
    int state = -1;
    for (int i = 0; i < m; ++i) {
        if (u < ph.alpha(i)) {
            state = i;
            break;
        }
        u -= ph.alpha(i);
    }
    if (state < 0) return 0.0; // defective start mass: zero jump

    const Vector exit = ph.exit();
    double total = 0.0;
    while (true) {
        const double hold = -ph.T(state, state);
        const double sojourn = exponential() / hold;
        total += sojourn;
        if (phases) phases->emplace_back(state, sojourn);
        double v = uniform() * hold;
        if (v < exit(state)) return total;
        v -= exit(state);
        int nextState = -1;
        for (int jcol = 0; jcol < m; ++jcol) {
            if (jcol == state) continue;
            if (v < ph.T(state, jcol)) {
                nextState = jcol;
                break;
            }
            v -= ph.T(state, jcol);
        }
        // rounding can leave v marginally above every rate; absorb then
        state = nextState >= 0 ? nextState : state;
        if (nextState < 0) return total;
    }
}

Rng path_rng(std::uint64_t seed, std::int64_t pathIndex) {
    // finalize (seed, index) into a well-separated state so that per-path
    // streams never overlap sections of one master stream
    std::uint64_t z =
        seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(pathIndex + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return Rng(z);
}

// ---------------------------------------------------------------------------
// Exact Brownian segment functionals
// ---------------------------------------------------------------------------

double bridge_maximum(double x0, double x1, double dt, double sigma2,
                      Rng& rng) {
    if (dt <= 0.0 || sigma2 <= 0.0) return std::max(x0, x1);
    const double u = rng.uniform();
    const double d = x1 - x0;
    return 0.5 * ((x0 + x1) + std::sqrt(d * d - 2.0 * sigma2 * dt * std::log(u)));
}

double bridge_argmax(double x0, double x1, double vmax, double dt,
                     double sigma2, Rng& rng) {
    const double a1 = vmax - x0;
    const double a2 = vmax - x1;
    const double scale = sigma2 * dt;
    if (dt <= 0.0 || scale <= 0.0) return x1 > x0 ? dt : 0.0;
    const double tiny = 1e-12 * std::sqrt(scale);
    if (a1 <= tiny) return 0.0;
    if (a2 <= tiny) return dt;
    // theta = dt / (1 + v) with v = (dt - theta)/theta distributed as a
    // two-sided inverse-Gaussian mixture determined by the heights a1, a2
    const double A = a1 * a1 / scale;
    const double B = a2 * a2 / scale;
    const double w1 = a1 / (a1 + a2);
    double v;
    if (rng.uniform() < w1)
        v = rng.inverse_gaussian(a2 / a1, B);
    else
        v = 1.0 / rng.inverse_gaussian(a1 / a2, A);
    return dt / (1.0 + v);
}

// ---------------------------------------------------------------------------
// Path engine
// ---------------------------------------------------------------------------

namespace {

struct PathRecord {
    double M = 0.0;        // supremum over [0, horizon]
    double G = 0.0;        // attainment time of the supremum
    double xEnd = 0.0;     // position at the horizon
    double horizon = 0.0;  // e(q) draw
    double overshoot = 0.0;
    int cause = -1; // -1 no crossing, 0 creep, j >= 1 up-jump phase j
    bool crossed = false;
};

struct EngineSetup {
    PhLevyModel m;
    double lamUp = 0.0;
    double lamDown = 0.0;
    double lamTot = 0.0;
    int upOrder = 0;
};

EngineSetup prepare(const PhLevyModel& model) {
    EngineSetup s;
    s.m = thin_defects(model);
    classify_paths(s.m.minus); // rejects the excluded parameter region
    s.lamUp = s.m.upRate;
    s.lamDown = s.m.minus.downRate;
    s.lamTot = s.lamUp + s.lamDown;
    s.upOrder = s.m.upLaw ? s.m.upLaw->order() : 0;
    return s;
}

// One exact path: between jump epochs the Brownian segment maximum (and its
// argmax when it sets a record) is drawn from the bridge law; jumps walk the
// phase chain so that a crossing jump reports its occupied phase and the
// overshoot. G is the record-setting attainment time of the supremum, which
// is almost surely unique for every model class exercised by the tests.
PathRecord run_path(const EngineSetup& s, const SimConfig& cfg,
                    std::int64_t pathIndex,
                    std::vector<std::pair<int, double>>& scratch) {
    Rng rng = path_rng(cfg.seed, pathIndex);
    PathRecord rec;
    rec.horizon = rng.exponential() / cfg.qRate;

    const double c = s.m.minus.drift;
    const double s2 = s.m.minus.sigma2;
    const double level = cfg.level;
    const double inf = std::numeric_limits<double>::infinity();

    double t = 0.0, x = 0.0;
    while (t < rec.horizon) {
        const double tJump = s.lamTot > 0.0 ? rng.exponential() / s.lamTot : inf;
        const bool isJump = tJump <= rec.horizon - t;
        const double dt = isJump ? tJump : rec.horizon - t;

        if (dt > 0.0) {
            if (s2 > 0.0 && cfg.bridgeSampling) {
                const double x1 = x + c * dt + std::sqrt(s2 * dt) * rng.normal();
                const double vmax = bridge_maximum(x, x1, dt, s2, rng);
                if (vmax > rec.M) {
                    rec.G = t + bridge_argmax(x, x1, vmax, dt, s2, rng);
                    rec.M = vmax;
                }
                if (!rec.crossed && vmax > level) {
                    rec.crossed = true;
                    rec.cause = 0; // continuous crossing
                }
                x = x1;
            } else if (s2 > 0.0) {
                // grid fallback: step the segment on a fixed mesh; segment
                // maxima are undersampled, so estimates are biased low
                const double h = 1e-3;
                double remaining = dt;
                double tcur = t;
                while (remaining > 0.0) {
                    const double step = std::min(h, remaining);
                    x += c * step + std::sqrt(s2 * step) * rng.normal();
                    tcur += step;
                    if (x > rec.M) {
                        rec.M = x;
                        rec.G = tcur;
                    }
                    if (!rec.crossed && x > level) {
                        rec.crossed = true;
                        rec.cause = 0;
                    }
                    remaining -= step;
                }
            } else {
                const double x1 = x + c * dt;
                if (c > 0.0) {
                    if (!rec.crossed && x1 > level) {
                        rec.crossed = true;
                        rec.cause = 0;
                    }
                    if (x1 > rec.M) {
                        rec.M = x1;
                        rec.G = t + dt;
                    }
                }
                x = x1;
            }
        }
        t += dt;
        if (!isJump) break;

        const bool up =
            s.lamUp > 0.0 &&
            (s.lamDown == 0.0 || rng.uniform() < s.lamUp / s.lamTot);
        if (up) {
            scratch.clear();
            const double jump = rng.phase_type(*s.m.upLaw, &scratch);
            if (!rec.crossed && x + jump > level) {
                rec.crossed = true;
                const double need = level - x;
                double cum = 0.0;
                for (const auto& [phase, sojourn] : scratch) {
                    cum += sojourn;
                    if (need < cum) {
                        rec.cause = phase + 1;
                        break;
                    }
                }
                if (rec.cause < 0 && !scratch.empty())
                    rec.cause = scratch.back().first + 1;
                rec.overshoot = jump - need;
            }
            x += jump;
            if (x > rec.M) {
                rec.M = x;
                rec.G = t;
            }
        } else if (s.lamDown > 0.0) {
            x -= rng.phase_type(*s.m.minus.downLaw, nullptr);
        }
    }
    rec.xEnd = x;
    return rec;
}

int worker_count(std::int64_t paths) {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* cap = std::getenv("LADDERKIT_THREADS")) {
        const int lim = std::atoi(cap);
        if (lim >= 1) n = std::min(n, lim);
    }
    return static_cast<int>(std::min<std::int64_t>(n, std::max<std::int64_t>(paths, 1)));
}

std::vector<PathRecord> run_paths(const PhLevyModel& model,
                                  const SimConfig& cfg) {
    if (cfg.paths <= 0) throw DomainError("simulate: path count must be positive");
    if (cfg.qRate <= 0.0) throw DomainError("simulate: horizon rate must be positive");
    const EngineSetup setup = prepare(model);
    std::vector<PathRecord> records(static_cast<std::size_t>(cfg.paths));

    const int nw = worker_count(cfg.paths);
    auto block = [&](std::int64_t lo, std::int64_t hi) {
        std::vector<std::pair<int, double>> scratch;
        for (std::int64_t i = lo; i < hi; ++i)
            records[static_cast<std::size_t>(i)] = run_path(setup, cfg, i, scratch);
    };
    if (nw == 1) {
        block(0, cfg.paths);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nw));
        const std::int64_t chunk = (cfg.paths + nw - 1) / nw;
        for (int w = 0; w < nw; ++w) {
            const std::int64_t lo = w * chunk;
            const std::int64_t hi = std::min<std::int64_t>(lo + chunk, cfg.paths);
            if (lo >= hi) break;
            pool.emplace_back(block, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return records;
}

SimEstimate mean_estimate(const std::vector<double>& xs, std::uint64_t seed) {
    SimEstimate est;
    est.n = static_cast<std::int64_t>(xs.size());
    est.seed = seed;
    if (xs.empty()) return est;
    double sum = 0.0;
    for (double v : xs) sum += v;
    est.value = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double v : xs) ss += (v - est.value) * (v - est.value);
    const double n = static_cast<double>(xs.size());
    est.stdError = n > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return est;
}

} // namespace

// ---------------------------------------------------------------------------
// Public estimators (each slices one deterministic engine pass)
// ---------------------------------------------------------------------------

FirstPassageSim simulate_first_passage(const PhLevyModel& model,
                                       const SimConfig& cfg) {
    const EngineSetup setup = prepare(model);
    const auto records = run_paths(model, cfg);

    FirstPassageSim out;
    out.biasWarning = !cfg.bridgeSampling && setup.m.minus.sigma2 > 0.0;
    std::vector<double> crossInd(records.size()), creepInd(records.size());
    out.phaseFreq = RowVector::Zero(setup.upOrder + 1);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const PathRecord& r = records[i];
        crossInd[i] = r.crossed ? 1.0 : 0.0;
        creepInd[i] = (r.crossed && r.cause == 0) ? 1.0 : 0.0;
        if (r.crossed) {
            out.phaseFreq(r.cause) += 1.0;
            if (r.cause > 0) out.overshootSamples.push_back(r.overshoot);
        }
    }
    out.phaseFreq /= static_cast<double>(records.size());
    out.pCross = mean_estimate(crossInd, cfg.seed);
    out.creepFraction = mean_estimate(creepInd, cfg.seed);
    return out;
}

std::vector<double> simulate_sup(const PhLevyModel& model,
                                 const SimConfig& cfg) {
    const auto records = run_paths(model, cfg);
    std::vector<double> sup(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) sup[i] = records[i].M;
    return sup;
}

SimEstimate simulate_wh4(const PhLevyModel& model, const SimConfig& cfg,
                         double aArg, double b) {
    if (aArg < 0.0 || b < 0.0)
        throw DomainError("simulate_wh4: transform arguments must be nonnegative");
    const auto records = run_paths(model, cfg);
    std::vector<double> ys(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const PathRecord& r = records[i];
        ys[i] = std::exp(-aArg * (r.horizon - r.G) - b * (r.M - r.xEnd));
    }
    return mean_estimate(ys, cfg.seed);
}

} // namespace ladderkit
