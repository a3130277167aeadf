#pragma once

#include <optional>
#include <utility>

#include "ladderkit/whfactor.hpp"

namespace ladderkit {

// ---------------------------------------------------------------------------
// Explicit laws and transforms built on a solved ladder factorisation:
// supremum law, first-passage transforms, overshoot/creeping split, the
// Wiener-Hopf factors by two independent routes, ladder cumulants and the
// ladder-height description.
// ---------------------------------------------------------------------------

/// A sub-probability law made of an atom at zero plus a (possibly defective)
/// phase-type tail. Total mass below one encodes killing.
struct AtomPlusPhaseType {
    double atom0 = 0.0;
    std::optional<PhaseType> tail;

    double totalMass() const {
        return atom0 + (tail ? tail->alpha.sum() : 0.0);
    }
};

struct LadderHeightDescription {
    PathClass pathCase = PathClass::General;
    double drift = 0.0;         ///< 1 in the general case, 0 subordinator
    double jumpIntensity = 0.0; ///< Phi(lambda^+) or the local-time constant
    AtomPlusPhaseType jumpLaw;
};

/// Law of M_{e(q)} = sup of X (or 0) over an independent exponential horizon.
/// General case: P(M > k) = e_0 e^{Q+_q k} 1, atom0 = 0. Subordinator case
/// (derived form, Monte Carlo gated in the tests): tail eta_q e^{Q+_q k} 1,
/// atom0 = 1 - sum eta_q.
AtomPlusPhaseType sup_law(const PhLevyModel& model, double q);

/// E[e^{-q T+(k)}] = P(M_{e(q)} > k): first-passage transform over level k.
double first_passage_lt(const PhLevyModel& model, double q, double k);

/// Phase distribution of the up-crossing ladder process at level k,
/// e_0 e^{Q+_q k}: component 0 is "at the supremum via the continuous part",
/// components 1..m are mid-up-jump phases. General path class only.
RowVector ladder_phase(const PhLevyModel& model, double q, double k);

/// Overshoot law over level k on the event of passage before e(q):
/// atom0 = creeping mass (component 0 of ladder_phase), tail = phase-type
/// with the mid-jump components as initial vector and subintensity T+.
AtomPlusPhaseType overshoot_law(const PhLevyModel& model, double q, double k);

/// Both sides of the joint first-passage/overshoot transform identity at an
/// exponential level: lhs integrates the ladder phases in closed form,
/// rhs = (lam/(lam-mu)) [1 - phi+_q(-lam)/phi+_q(-mu)]. lam = mu is a
/// removable singularity, rejected with DomainError so callers perturb.
std::pair<double, double> joint_transform(const PhLevyModel& model, double q,
                                          double lam, double mu);

/// Root-route Wiener-Hopf factor
/// phi+_a(s) = [det(-sI - T+)/det(-T+)] prod(-rho_i) / prod(s - rho_i)
/// over the positive-real-part roots of kappa(rho) = a (first factor 1 when
/// there are no positive jumps).
Complex wh_plus_roots(const PhLevyModel& model, double a, Complex s);

/// Matrix-route factor E[e^{s M_{e(a)}}] from the solved supremum law:
/// atom0 + iota (-sI - Q+_a)^{-1} q+ with q+ = -Q+ 1. Agreement with
/// wh_plus_roots is the central two-route correctness test.
Complex wh_plus_matrix(const PhLevyModel& model, double a, Complex s);

/// Complementary factor phi-_a(s) = [a/(a - kappa(s))] / phi+_a(s) on the
/// imaginary axis (matrix route in the denominator).
Complex wh_minus(const PhLevyModel& model, double a, Complex s);

/// Ascending ladder cumulant. General case:
/// kappa+(a,s) = prod_{i in I+}(s + rho_i(a)) / det(sI - T+), denominator 1
/// when lambda^+ = 0; at a = 0 the root set is augmented with the vanishing
/// root at 0 exactly when mean_slope >= 0 (that is the side the small-a root
/// approaches 0 from), keeping |I+| = m+ + 1.
/// Subordinator case: the root-product closed form, which requires the
/// local-time constant; see kappa_plus_sub_crosscheck for its known defects.
Complex ladder_cumulant_plus(const PhLevyModel& model, double a, Complex s,
                             std::optional<double> localTimeC = std::nullopt);

/// Descending (dual) ladder cumulant, orientation fixed so that the exponent
/// factorisation kappa+(a,-s) kappa-(a,s) = a - kappa(s) holds identically
/// with constant 1:
/// kappa-(a,s) = (a - kappa(s)) det(-sI - T+) / prod_{i in I+}(rho_i(a) - s).
/// (The alternative orientation det(sI - T+)/prod(s - rho_i) leaves the
/// up-jump poles uncancelled and fails that constancy; only the constant is
/// genuinely free, and it is pinned to 1 here.)
Complex ladder_cumulant_minus(const PhLevyModel& model, double a, Complex s);

/// Ladder height process description. General case: unit drift, jump
/// intensity Phi(lambda^+), jump law from eta_0 split into the zero atom
/// (component 0) and a phase-type tail (components 1..m over T+).
/// Subordinator case: zero drift, compound Poisson at the local-time constant
/// (required argument there), jump law phase-type (eta_0, T+).
LadderHeightDescription ladder_height_law(
    const PhLevyModel& model,
    std::optional<double> localTimeC = std::nullopt);

/// Both routes of E[e^{-b M_{e(q)}}]: the supremum-law transform on the left
/// and kappa+(q,0)/kappa+(q,b) on the right.
std::pair<double, double> wh3_identity(const PhLevyModel& model, double q,
                                       double b);

/// Subordinator case only: the root-product ladder cumulant evaluated
/// literally (first), next to the compound Poisson construction value
/// c (1 - eta_a (sI - T+)^{-1} t+) (second). The two routes can disagree
/// (the root-product form flips sign for odd m+ and its prefactor vanishes
/// at a = 0 in the mean-zero case); callers report the discrepancy rather
/// than patching it.
std::pair<double, double> kappa_plus_sub_crosscheck(const PhLevyModel& model,
                                                    double a, double s,
                                                    double localTimeC);

} // namespace ladderkit
