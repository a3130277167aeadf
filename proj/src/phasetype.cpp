#include "ladderkit/phasetype.hpp"

#include "ladderkit/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace ladderkit {

std::vector<std::string> validate(const PhaseType& ph) {
    std::vector<std::string> issues;
    const int m = ph.order();
    if (m == 0) { issues.push_back("empty representation"); return issues; }
    if (ph.alpha.size() != m)
        issues.push_back("alpha and T dimensions disagree");
    if (!ph.alpha.allFinite() || !ph.T.allFinite()) {
        issues.push_back("non-finite entries");
        return issues;
    }
    for (int i = 0; i < std::min<int>(m, static_cast<int>(ph.alpha.size())); ++i) {
        if (ph.alpha(i) < -1e-14) {
            std::ostringstream os;
            os << "negative initial probability alpha[" << i << "] = " << ph.alpha(i);
            issues.push_back(os.str());
        }
    }
    const double mass = ph.alpha.sum();
    if (mass > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "initial mass exceeds 1: sum(alpha) = " << mass;
        issues.push_back(os.str());
    }
    for (int i = 0; i < m; ++i) {
        if (ph.T(i, i) >= 0.0) {
            std::ostringstream os;
            os << "diagonal T[" << i << "][" << i << "] not strictly negative: "
               << ph.T(i, i);
            issues.push_back(os.str());
        }
        double rowSum = 0.0;
        for (int j = 0; j < m; ++j) {
            if (j != i && ph.T(i, j) < -1e-12) {
                std::ostringstream os;
                os << "off-diagonal T[" << i << "][" << j
                   << "] negative: " << ph.T(i, j);
                issues.push_back(os.str());
            }
            rowSum += ph.T(i, j);
        }
        if (rowSum > 1e-10) {
            std::ostringstream os;
            os << "not subintensity: row " << i << " of T sums to " << rowSum;
            issues.push_back(os.str());
        }
    }
    // an invertible T means every phase is transient and the law is honest
    if (issues.empty()) {
        Eigen::FullPivLU<Matrix> lu(ph.T);
        if (!lu.isInvertible()) issues.push_back("T is singular (non-transient phase)");
    }
    return issues;
}

double cdf(const PhaseType& ph, double x) {
    if (x < 0.0) throw DomainError("cdf: negative argument");
    // F(x) = 1 - alpha e^{Tx} 1; a defective alpha leaves an atom at zero,
    // which this convention counts, so F(0) = 1 - sum(alpha)
    const Matrix E = matrix_exponential(ph.T, x);
    return 1.0 - (ph.alpha * E).sum();
}

double density(const PhaseType& ph, double x) {
    if (x < 0.0) throw DomainError("density: negative argument");
    const Matrix E = matrix_exponential(ph.T, x);
    return (ph.alpha * E * ph.exit()).value();
}

Complex lst(const PhaseType& ph, Complex s) {
    // alpha (sI - T)^{-1} t, analytic off the eigenvalues of T
    const int m = ph.order();
    Eigen::MatrixXcd A = -ph.T.cast<Complex>();
    A.diagonal().array() += s;
    const Eigen::VectorXcd t = ph.exit().cast<Complex>();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const Eigen::VectorXcd x = lu.solve(t);
    if (!x.allFinite()) throw PoleError("lst: argument hits the spectrum of T");
    const double resid = (A * x - t).cwiseAbs().maxCoeff();
    const double scale =
        (t.cwiseAbs().maxCoeff() + 1.0) * (1.0 + x.cwiseAbs().maxCoeff());
    if (resid > 1e-8 * scale)
        throw PoleError("lst: argument too close to the spectrum of T");
    Complex out = 0.0;
    for (int i = 0; i < m; ++i) out += ph.alpha(i) * x(i);
    return out;
}

double mean(const PhaseType& ph) {
    // first moment alpha (-T)^{-1} 1 (the implicit zero atom contributes 0)
    Eigen::PartialPivLU<Matrix> lu(ph.T);
    const Vector ones = Vector::Ones(ph.order());
    const Vector x = lu.solve(ones);
    if (!x.allFinite()) throw DomainError("mean: singular subintensity");
    return -(ph.alpha * x).value();
}

TiltResult tilt_ph(const PhaseType& ph, double theta) {
    const int m = ph.order();
    // valid while theta stays strictly left of the tail decay rate
    const double tMax =
        Eigen::EigenSolver<Matrix>(ph.T, false).eigenvalues().real().maxCoeff();
    if (theta + tMax >= -1e-14) {
        std::ostringstream os;
        os << "tilt_ph: tilt " << theta
           << " reaches the spectral abscissa of T (" << tMax << ")";
        throw DomainError(os.str());
    }

    // k = (-theta I - T)^{-1} t, strictly positive on the valid range
    Matrix A = -ph.T;
    A.diagonal().array() -= theta;
    const Vector t = ph.exit();
    const Vector k = A.partialPivLu().solve(t);
    if (!k.allFinite() || (k.array() <= 0.0).any())
        throw DomainError("tilt_ph: transform vector not strictly positive");

    const double normaliser = (ph.alpha * k).value();
    if (normaliser <= 0.0) throw DomainError("tilt_ph: non-positive normaliser");

    TiltResult out;
    out.k = k;
    out.normaliser = normaliser;
    out.law.T = k.cwiseInverse().asDiagonal() * ph.T * k.asDiagonal();
    out.law.T.diagonal().array() += theta;
    out.law.alpha = (ph.alpha.array() * k.transpose().array()) / normaliser;

    // the tilted exit vector is diag(k)^{-1} t exactly; rebuild the diagonal
    // from that identity so row sums carry no rounding drift
    const Vector newExit = t.cwiseQuotient(k);
    for (int i = 0; i < m; ++i) {
        double offSum = 0.0;
        for (int j = 0; j < m; ++j)
            if (j != i) offSum += out.law.T(i, j);
        out.law.T(i, i) = -(offSum + newExit(i));
    }

    // construction-time proof of the sign convention: the tilted transform
    // must satisfy F_theta[s] = F[s - theta] / normaliser
    const double probe = std::max(1.0, -tMax);
    for (double s : {probe, 2.0 * probe, 3.5 * probe}) {
        const Complex lhs = lst(out.law, Complex(s, 0.0));
        const Complex rhs = lst(ph, Complex(s - theta, 0.0)) / normaliser;
        if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(rhs))) {
            std::ostringstream os;
            os << "tilt_ph: transform identity violated at s = " << s;
            throw InternalError(os.str());
        }
    }
    return out;
}

} // namespace ladderkit
