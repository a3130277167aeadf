#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ladderkit/numerics.hpp"
#include "ladderkit/phasetype.hpp"

namespace ladderkit {

// ---------------------------------------------------------------------------
// The Levy model X = X(+) + X(-): a spectrally negative part (drift, Brownian
// coefficient, compound Poisson phase-type down jumps) plus compound Poisson
// phase-type up jumps.
// ---------------------------------------------------------------------------

/// Parameters of X(-). `sigma2` stores the square of the Gaussian coefficient
/// (the source text reuses the letter s for that coefficient and for the
/// transform argument; this module settles on `gaussian`/sigma2 and moves on).
struct SpectrallyNegativeComponent {
    double drift = 0.0;    ///< c
    double sigma2 = 0.0;   ///< squared Gaussian coefficient, >= 0
    double downRate = 0.0; ///< lambda^-
    std::optional<PhaseType> downLaw;
};

struct PhLevyModel {
    SpectrallyNegativeComponent minus;
    double upRate = 0.0; ///< lambda^+
    std::optional<PhaseType> upLaw;
};

enum class PathClass {
    MinusIsSubordinator, ///< -X(-) is a subordinator: sigma = 0 and drift <= 0
    General
};

/// Root report for the Cramer-Lundberg equation kappa(rho) = a.
struct CLRootReport {
    double level = 0.0;
    std::vector<Complex> positiveRoots; ///< Re rho > 0 (the set I+)
    std::vector<Complex> otherRoots;    ///< the rest
    std::vector<Complex> spurious;      ///< discarded pole artefacts
};

/// Replaces defective jump laws with the equivalent conservative pair
/// (rate * mass, alpha/mass). An atom at zero jump size is motion-free, so
/// this is exact. Solver and transform entry points call it themselves;
/// exposed for tests and serialization round-trips.
PhLevyModel thin_defects(const PhLevyModel& model);

/// Levy exponent kappa(s) = sigma2/2 s^2 + c s + lambda^-(F^-[s] - 1)
///                        + lambda^+(F^+[-s] - 1); kappa(0) = 0.
/// Throws PoleError at transform poles.
Complex levy_exponent(const PhLevyModel& model, Complex s);

/// Scalar exponent of the minus part alone (real argument), same conventions.
double minus_exponent(const SpectrallyNegativeComponent& snc, double s);

/// Matrix functional kappa_{X-}(-G) = sigma2/2 G^2 - c G
///                                  + lambda^- (ph_weighted_integral(G) - I).
/// For 1x1 G = (g) this equals the scalar kappa_{X-}(-g).
Matrix minus_exponent_matrix(const SpectrallyNegativeComponent& snc,
                             const Matrix& G);

/// Largest real root Phi(q) >= 0 of kappa_{X-}(s) = q. Positive for q > 0;
/// for q = 0 returns 0 when the minus part has nonnegative mean slope and the
/// positive root otherwise. Undefined (DomainError) when -X(-) is a
/// subordinator.
double phi_root(const SpectrallyNegativeComponent& snc, double q);

/// Roots of kappa(rho) = a after clearing the rational denominators; every
/// reported root back-substitutes to |kappa(rho) - a| <= 1e-8, candidates at
/// poles that fail this are listed as spurious.
CLRootReport cl_roots(const PhLevyModel& model, double a);

/// Path-class split. Throws DomainError for the excluded pure-negative-drift
/// minus part (sigma = 0, no down jumps, drift < 0).
PathClass classify_paths(const SpectrallyNegativeComponent& snc);

/// kappa'(0+) = c - lambda^- mean(downLaw) + lambda^+ mean(upLaw).
double mean_slope(const PhLevyModel& model);

// ---------------------------------------------------------------------------
// Dense-approximation builder: truncate a Levy measure at +-eps and fit
// hyperexponential laws to the normalised excess-over-eps tails.
// ---------------------------------------------------------------------------

/// A Levy measure presented through tail masses and quantiles of the
/// normalised excess law (B - eps | B > eps). Quantile arguments p are in
/// (0, 1) and refer to the excess distribution, not the raw tail.
class LevyMeasureSpec {
public:
    virtual ~LevyMeasureSpec() = default;
    virtual double tail_mass_up(double eps) const = 0;   ///< nu(eps, inf)
    virtual double tail_mass_down(double eps) const = 0; ///< nu(-inf, -eps)
    virtual double up_excess_quantile(double eps, double p) const = 0;
    virtual double down_excess_quantile(double eps, double p) const = 0;
    virtual double drift() const = 0;
    virtual double sigma2() const = 0;
};

struct ApproxDiagnostics {
    double upResidual = 0.0;   ///< sup-norm survival misfit on the grid
    double downResidual = 0.0;
    std::vector<std::string> warnings;
};

/// Builds the compound Poisson approximation at truncation level eps:
/// rates are the tail masses, jump laws are hyperexponential fits (at most
/// phaseBudget phases, nonnegative least squares on a log-spaced survival
/// grid) to each excess law, Brownian/drift part passed through. A fit
/// residual above 1e-2 is reported as a warning, never an error.
PhLevyModel approximate(const LevyMeasureSpec& nu, double eps, int phaseBudget,
                        ApproxDiagnostics* diag = nullptr);

} // namespace ladderkit
