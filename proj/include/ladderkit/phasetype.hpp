#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "ladderkit/errors.hpp"

namespace ladderkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Complex = std::complex<double>;

/// Phase-type law: absorption time of a Markov chain with m transient phases,
/// initial row vector alpha and subintensity T. The exit vector is t = -T*1.
/// sum(alpha) < 1 is allowed (defective law; callers carry the atom at zero).
/// Minimality of the representation is a user obligation, not verified here.
struct PhaseType {
    RowVector alpha;
    Matrix T;

    int order() const { return static_cast<int>(T.rows()); }
    Vector exit() const { return -T.rowwise().sum(); }
    double totalMass() const { return alpha.sum(); }
};

/// Checks every representation invariant and reports each violation in plain
/// words. Empty result means the representation is valid. Never throws.
std::vector<std::string> validate(const PhaseType& ph);

/// F(x) = 1 - alpha e^{Tx} 1 for x >= 0. The atom the representation leaves
/// at zero (1 - sum alpha) is excluded, so cdf(0) = 1 - sum(alpha).
double cdf(const PhaseType& ph, double x);

/// Density alpha e^{Tx} t for x > 0; integrates to sum(alpha) over (0, inf).
double density(const PhaseType& ph, double x);

/// Laplace-Stieltjes transform alpha (sI - T)^{-1} t. Throws PoleError when s
/// collides with an eigenvalue of T.
Complex lst(const PhaseType& ph, Complex s);

/// Mean alpha (-T)^{-1} 1.
double mean(const PhaseType& ph);

struct TiltResult {
    PhaseType law;      ///< tilted representation
    double normaliser;  ///< E[e^{theta B}] = F[-theta]
    Vector k;           ///< k = (-theta I - T)^{-1} t, the similarity scaling
};

/// Esscher tilt of a phase-type law. Valid while theta stays strictly below
/// the decay rate of the tail, i.e. theta + max Re eig(T) < 0. The sign
/// convention of the scaling vector is easy to get backwards, so the
/// implementation commits to k = (-theta I - T)^{-1} t and proves the choice
/// at construction by checking F_theta[s] = F[s - theta]/F[-theta] on a small
/// grid (InternalError on failure, DomainError when theta is too large).
TiltResult tilt_ph(const PhaseType& ph, double theta);

} // namespace ladderkit
