#include "ladderkit/whfactor.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace ladderkit {

namespace {

void require_up_law(const PhLevyModel& m) {
    if (m.upRate < 0.0) throw DomainError("up jump rate is negative");
    if (m.upRate > 0.0 && !m.upLaw)
        throw DomainError("up jump rate positive but no jump law given");
}

// kappa_{X-}'(0+) = c - lambda^- * mean(downLaw)
double minus_slope(const SpectrallyNegativeComponent& snc) {
    double s = snc.drift;
    if (snc.downRate > 0.0 && snc.downLaw) s -= snc.downRate * mean(*snc.downLaw);
    return s;
}

std::vector<double> strip_leading_zeros(std::vector<double> p) {
    while (p.size() > 1 && p.back() == 0.0) p.pop_back();
    return p;
}

// The blocks of the general-case generator parametrisation
// Q+ = M+ + m+ eta with M+ = [[-Phi(q), 0], [t+, T+]], m+ = (Phi(q), 0..)'.
struct GeneralBlocks {
    Matrix Mplus;
    Vector mplus;
    RowVector prefix; ///< (0, alpha+)
    double phi = 0.0;
};

GeneralBlocks general_blocks(const PhLevyModel& m, double q) {
    GeneralBlocks b;
    b.phi = phi_root(m.minus, q);
    if (m.upRate == 0.0) {
        b.Mplus = Matrix::Constant(1, 1, -b.phi);
        b.mplus = Vector::Constant(1, b.phi);
        b.prefix = RowVector::Zero(1);
        return b;
    }
    const PhaseType& up = *m.upLaw;
    const int mu = up.order();
    const int n = mu + 1;
    b.Mplus = Matrix::Zero(n, n);
    b.Mplus(0, 0) = -b.phi;
    b.Mplus.block(1, 0, mu, 1) = up.exit();
    b.Mplus.block(1, 1, mu, mu) = up.T;
    b.mplus = Vector::Zero(n);
    b.mplus(0) = b.phi;
    b.prefix = RowVector::Zero(n);
    b.prefix.segment(1, mu) = up.alpha;
    return b;
}

RowVector project_to_simplex(RowVector e) {
    for (int i = 0; i < e.size(); ++i) e(i) = std::max(e(i), 0.0);
    const double s = e.sum();
    if (s > 1.0) e *= 1.0 / s;
    return e;
}

struct IterOutcome {
    RowVector eta;
    int iterations = 0;
    double finalStep = 0.0;
    std::vector<double> stepHistory;
    bool newton = false;
};

/// Monotone fixed-point loop from eta = 0 with a Newton finish for the
/// harmonically slow boundary cases (step ratio stuck near 1). The Newton
/// phase tries both the solved step and its double: at a double root of
/// psi(eta) - eta the doubled step is the exact correction, which restores
/// fast convergence where plain Newton degrades to linear.
IterOutcome run_iteration(int n,
                          const std::function<RowVector(const RowVector&)>& psiFn,
                          double tol, int maxIter) {
    IterOutcome out;
    out.eta = RowVector::Zero(n);
    if (n == 0) return out;

    double prevStep = std::numeric_limits<double>::infinity();
    bool stalled = false;
    while (out.iterations < maxIter) {
        const RowVector next = psiFn(out.eta);
        ++out.iterations;
        for (int i = 0; i < n; ++i) {
            if (next(i) < out.eta(i) - 1e-13) {
                std::ostringstream os;
                os << "monotone iteration decreased in component " << i
                   << " by " << out.eta(i) - next(i);
                throw InternalError(os.str());
            }
        }
        const double step = (next - out.eta).cwiseAbs().sum();
        out.stepHistory.push_back(step);
        out.eta = next;
        out.finalStep = step;
        if (step <= tol) return out;
        if (out.iterations >= 30 && step / prevStep > 0.9) { stalled = true; break; }
        prevStep = step;
    }
    if (!stalled) {
        std::ostringstream os;
        os << "fixed-point iteration did not reach tol " << tol << " in "
           << maxIter << " steps";
        throw ConvergenceError(os.str(), out.finalStep);
    }

    out.newton = true;
    auto F = [&](const RowVector& e) { return RowVector(psiFn(e) - e); };
    RowVector Fv = F(out.eta);
    double fNorm = Fv.cwiseAbs().sum();
    for (int round = 0; round < 60 && out.iterations < maxIter; ++round) {
        if (fNorm <= tol) break;
        ++out.iterations;

        // central-difference Jacobian of F (exact through quadratic terms,
        // which is what the double-root geometry demands)
        Matrix J(n, n);
        for (int j = 0; j < n; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(out.eta(j)));
            RowVector ep = out.eta, em = out.eta;
            ep(j) += h;
            em(j) -= h;
            J.col(j) = ((F(ep) - F(em)) / (2.0 * h)).transpose();
        }
        const Vector delta = J.fullPivLu().solve(-Fv.transpose());

        bool accepted = false;
        if (delta.allFinite()) {
            const RowVector c1 = project_to_simplex(out.eta + delta.transpose());
            const RowVector c2 =
                project_to_simplex(out.eta + 2.0 * delta.transpose());
            const RowVector F1 = F(c1), F2 = F(c2);
            const double n1 = F1.cwiseAbs().sum(), n2 = F2.cwiseAbs().sum();
            const bool takeDouble = n2 < n1;
            const RowVector& cand = takeDouble ? c2 : c1;
            const double nc = takeDouble ? n2 : n1;
            if (nc < fNorm) {
                out.finalStep = (cand - out.eta).cwiseAbs().sum();
                out.stepHistory.push_back(out.finalStep);
                out.eta = cand;
                Fv = takeDouble ? F2 : F1;
                fNorm = nc;
                accepted = true;
            }
        }
        if (!accepted) {
            // Newton rejected: fall back to one plain (projected) step
            const RowVector next = project_to_simplex(psiFn(out.eta));
            out.finalStep = (next - out.eta).cwiseAbs().sum();
            out.stepHistory.push_back(out.finalStep);
            out.eta = next;
            Fv = F(out.eta);
            fNorm = Fv.cwiseAbs().sum();
        }
    }
    if (fNorm > tol) {
        std::ostringstream os;
        os << "Newton finish did not reach tol " << tol << " (|F| = " << fNorm
           << ")";
        throw ConvergenceError(os.str(), fNorm);
    }
    return out;
}

void check_killed_generator(const Matrix& Q) {
    for (int i = 0; i < Q.rows(); ++i) {
        double rowSum = 0.0;
        for (int j = 0; j < Q.cols(); ++j) {
            if (j != i && Q(i, j) < -1e-12) {
                std::ostringstream os;
                os << "ladder generator has negative off-diagonal Q[" << i
                   << "][" << j << "] = " << Q(i, j);
                throw InternalError(os.str());
            }
            rowSum += Q(i, j);
        }
        if (rowSum > 1e-12) {
            std::ostringstream os;
            os << "ladder generator row " << i << " sums to " << rowSum
               << " > 0";
            throw InternalError(os.str());
        }
    }
}

void gate_residual(const PhLevyModel& m, double a, LadderSolution& sol,
                   double tol) {
    sol.residualValue = residual(m, a, sol);
    if (!(sol.residualValue <= 10.0 * tol)) {
        std::ostringstream os;
        os << "solution residual " << sol.residualValue << " exceeds 10*tol = "
           << 10.0 * tol;
        throw InternalError(os.str());
    }
    check_killed_generator(sol.Qplus);
}

// d/ds kappa(s) on the reals, off poles
double kappa_deriv(const PhLevyModel& m, double s) {
    double d = m.minus.sigma2 * s + m.minus.drift;
    if (m.minus.downRate > 0.0) {
        const PhaseType& ph = *m.minus.downLaw;
        Matrix A = -ph.T;
        A.diagonal().array() += s;
        Eigen::PartialPivLU<Matrix> lu(A);
        const Vector x = lu.solve(ph.exit());
        d -= m.minus.downRate * (ph.alpha * lu.solve(x)).value();
    }
    if (m.upRate > 0.0) {
        const PhaseType& ph = *m.upLaw;
        Matrix A = -ph.T;
        A.diagonal().array() -= s;
        Eigen::PartialPivLU<Matrix> lu(A);
        const Vector x = lu.solve(ph.exit());
        d += m.upRate * (ph.alpha * lu.solve(x)).value();
    }
    return d;
}

} // namespace

EmbeddingSpec build_embedding(const PhLevyModel& model, double a) {
    const PhLevyModel m = thin_defects(model);
    require_up_law(m);
    EmbeddingSpec spec;
    if (m.upRate == 0.0) {
        spec.Qa = Matrix::Constant(1, 1, -a);
        spec.Sigma = Matrix::Constant(1, 1, 1.0);
        spec.V = Matrix::Constant(1, 1, 0.0);
        return spec;
    }
    const PhaseType& up = *m.upLaw;
    const int mu = up.order();
    const int n = mu + 1;
    spec.Qa = Matrix::Zero(n, n);
    spec.Qa(0, 0) = -m.upRate - a;
    spec.Qa.block(0, 1, 1, mu) = m.upRate * up.alpha;
    spec.Qa.block(1, 0, mu, 1) = up.exit();
    spec.Qa.block(1, 1, mu, mu) = up.T;
    spec.Sigma = Matrix::Zero(n, n);
    spec.Sigma(0, 0) = 1.0;
    spec.V = Matrix::Identity(n, n) - spec.Sigma;
    return spec;
}

Matrix phi_minus_matrix(const SpectrallyNegativeComponent& snc, double q,
                        const Matrix& G) {
    if (q <= 0.0) throw DomainError("phi_minus_matrix: killing rate must be positive");
    if (classify_paths(snc) == PathClass::MinusIsSubordinator)
        throw DomainError("phi_minus_matrix: general path class required");
    if (G.rows() != G.cols())
        throw DomainError("phi_minus_matrix: non-square argument");

    // thin a defective down law so the polynomials below describe the
    // honest-law equivalent model
    SpectrallyNegativeComponent c = snc;
    if (c.downRate > 0.0 && c.downLaw) {
        const double mass = c.downLaw->totalMass();
        if (mass <= 0.0) { c.downRate = 0.0; c.downLaw.reset(); }
        else if (mass < 1.0 - 1e-15) { c.downRate *= mass; c.downLaw->alpha /= mass; }
    }

    const double Phi = phi_root(c, q);

    // R(s) = (q - kappa_{X-}(s)) chi^-(s)
    //      = (q + lambda^- - c s - sigma2/2 s^2) chi^-(s) - lambda^- N^-(s)
    // has Phi as a simple root; divide it out symbolically so the resolvent
    // stays regular when G carries the eigenvalue -Phi (it does at the first
    // iterate of the fixed point, where the singularity is removable).
    std::vector<double> chiMinus = {1.0}, nMinus = {0.0};
    if (c.downRate > 0.0) {
        const auto fl = char_poly_adjugate(c.downLaw->T);
        chiMinus = fl.charPoly;
        const Vector t = c.downLaw->exit();
        nMinus.assign(fl.adj.size(), 0.0);
        for (std::size_t k = 0; k < fl.adj.size(); ++k)
            nMinus[k] = (c.downLaw->alpha * fl.adj[k] * t).value();
    }
    std::vector<double> R =
        poly_mul({q + c.downRate, -c.drift, -0.5 * c.sigma2}, chiMinus);
    R = poly_add(R, poly_scale(nMinus, -c.downRate));
    R = strip_leading_zeros(R);
    // R(s) = (Phi - s) Rtilde(s); synthetic division gives R/(s - Phi)
    const std::vector<double> Rtilde = poly_scale(poly_deflate(R, Phi), -1.0);

    const Matrix H = -G;
    const Matrix num = poly_eval(chiMinus, H);
    const Matrix den = poly_eval(Rtilde, H);
    // phi = (q/Phi) num den^{-1}; polynomials in H commute so the order of
    // the two factors is immaterial
    const Matrix phiT =
        den.transpose().partialPivLu().solve((q / Phi) * num.transpose());
    if (!phiT.allFinite())
        throw SingularityError(
            "phi_minus_matrix: deflated resolvent is singular at this argument");
    return phiT.transpose();
}

RowVector psi(const PhLevyModel& model, double a, const RowVector& eta) {
    const PhLevyModel m = thin_defects(model);
    require_up_law(m);
    if (classify_paths(m.minus) != PathClass::General)
        throw DomainError("psi: general path class required");
    if (a < 0.0) throw DomainError("psi: negative killing");
    const double q = a + m.upRate;
    const GeneralBlocks b = general_blocks(m, q);
    if (eta.size() != b.Mplus.rows())
        throw DomainError("psi: eta length does not match m+ + 1");
    if (m.upRate == 0.0) return RowVector::Zero(eta.size());
    const Matrix G = b.Mplus + b.mplus * eta;
    return (m.upRate / q) * (b.prefix * phi_minus_matrix(m.minus, q, G));
}

RowVector psi_sub(const PhLevyModel& model, double a, const RowVector& eta) {
    const PhLevyModel m = thin_defects(model);
    require_up_law(m);
    if (classify_paths(m.minus) != PathClass::MinusIsSubordinator)
        throw DomainError("psi_sub: subordinator path class required");
    if (a < 0.0) throw DomainError("psi_sub: negative killing");
    if (m.upRate == 0.0) return RowVector(0);
    const PhaseType& up = *m.upLaw;
    if (eta.size() != up.order())
        throw DomainError("psi_sub: eta length does not match m+");
    const Matrix G = up.T + up.exit() * eta;
    const Matrix K = minus_exponent_matrix(m.minus, G);
    Matrix A = -K;
    A.diagonal().array() += m.upRate + a;
    const Vector x =
        A.transpose().partialPivLu().solve((m.upRate * up.alpha).transpose());
    if (!x.allFinite())
        throw SingularityError("psi_sub: singular iteration system");
    return x.transpose();
}

LadderSolution solve_ladder(const PhLevyModel& model, double a, double tol,
                            int maxIter) {
    if (a < 0.0) throw DomainError("solve_ladder: negative killing");
    if (tol <= 0.0) throw DomainError("solve_ladder: tolerance must be positive");
    if (maxIter < 1) throw DomainError("solve_ladder: maxIter must be >= 1");
    const PhLevyModel m = thin_defects(model);
    require_up_law(m);
    const PathClass pc = classify_paths(m.minus);

    // the recurrent drift-negative boundary has its fixed point reachable
    // only through the tilted model; route there
    if (a == 0.0 && m.upRate > 0.0 && mean_slope(m) < 0.0)
        return solve_tilted(m, a, tol, maxIter);

    LadderSolution sol;
    sol.killing = a;
    sol.pathCase = pc;

    if (pc == PathClass::General) {
        const double q = a + m.upRate;
        const GeneralBlocks b = general_blocks(m, q);
        sol.Mplus = b.Mplus;
        sol.mplus = b.mplus;
        sol.phi = b.phi;
        if (m.upRate == 0.0) {
            sol.eta = RowVector::Zero(1);
            sol.Qplus = b.Mplus;
        } else {
            auto psiFn = [&](const RowVector& e) {
                const Matrix G = b.Mplus + b.mplus * e;
                return RowVector((m.upRate / q) *
                                 (b.prefix * phi_minus_matrix(m.minus, q, G)));
            };
            const IterOutcome it =
                run_iteration(static_cast<int>(b.Mplus.rows()), psiFn, tol, maxIter);
            sol.eta = it.eta;
            sol.Qplus = b.Mplus + b.mplus * it.eta;
            sol.iterations = it.iterations;
            sol.finalStep = it.finalStep;
            sol.stepHistory = it.stepHistory;
            sol.newtonPolish = it.newton;
        }
    } else {
        if (m.upRate == 0.0) {
            sol.eta = RowVector(0);
            sol.Qplus = Matrix(0, 0);
        } else {
            const PhaseType& up = *m.upLaw;
            auto psiFn = [&](const RowVector& e) { return psi_sub(m, a, e); };
            const IterOutcome it = run_iteration(up.order(), psiFn, tol, maxIter);
            sol.eta = it.eta;
            sol.Qplus = up.T + up.exit() * it.eta;
            sol.iterations = it.iterations;
            sol.finalStep = it.finalStep;
            sol.stepHistory = it.stepHistory;
            sol.newtonPolish = it.newton;
        }
    }

    gate_residual(m, a, sol, tol);
    return sol;
}

double residual(const PhLevyModel& model, double a, const LadderSolution& sol) {
    const PhLevyModel m = thin_defects(model);
    require_up_law(m);
    if (sol.pathCase == PathClass::General) {
        const EmbeddingSpec spec = build_embedding(m, a);
        if (spec.Qa.rows() != sol.Qplus.rows())
            throw DomainError("residual: solution shape does not match model");
        const Matrix K = minus_exponent_matrix(m.minus, sol.Qplus);
        double r = (K.row(0) + spec.Qa.row(0)).cwiseAbs().maxCoeff();
        for (int i = 1; i < spec.Qa.rows(); ++i)
            r = std::max(r,
                         (spec.Qa.row(i) - sol.Qplus.row(i)).cwiseAbs().maxCoeff());
        return r;
    }
    // subordinator case
    if (m.upRate == 0.0) return 0.0;
    const PhaseType& up = *m.upLaw;
    if (sol.Qplus.rows() != up.order() || sol.eta.size() != up.order())
        throw DomainError("residual: solution shape does not match model");
    const Matrix K = minus_exponent_matrix(m.minus, sol.Qplus);
    Matrix A = K;
    A.diagonal().array() -= m.upRate + a;
    const RowVector r1 = sol.eta * A + m.upRate * up.alpha;
    const Matrix r2 = sol.Qplus - up.T - up.exit() * sol.eta;
    return std::max(r1.cwiseAbs().maxCoeff(), r2.cwiseAbs().maxCoeff());
}

double contraction_bound(const PhLevyModel& model, double a) {
    if (a <= 0.0) throw DomainError("contraction_bound: requires a > 0");
    const PhLevyModel m = thin_defects(model);
    require_up_law(m);
    if (classify_paths(m.minus) != PathClass::General)
        throw DomainError("contraction_bound: general path class required");
    const double Phi = phi_root(m.minus, a);
    // E[-I_{e(a)}] = 1/Phi(a) - kappa_{X-}'(0+)/a, so the Lipschitz bound
    // (lambda/(a+lambda)) E[-I] Phi simplifies to the expression below
    const double bound = (m.upRate / (a + m.upRate)) *
                         (1.0 - minus_slope(m.minus) * Phi / a);
    return std::max(bound, 0.0);
}

PhLevyModel tilt_model(const PhLevyModel& model, double gamma) {
    const PhLevyModel m = thin_defects(model);
    require_up_law(m);
    PhLevyModel t = m;
    t.minus.drift = m.minus.drift + m.minus.sigma2 * gamma;
    if (m.upRate > 0.0) {
        const TiltResult r = tilt_ph(*m.upLaw, gamma);
        t.upLaw = r.law;
        t.upRate = m.upRate * r.normaliser;
    }
    if (m.minus.downRate > 0.0) {
        const TiltResult r = tilt_ph(*m.minus.downLaw, -gamma);
        t.minus.downLaw = r.law;
        t.minus.downRate = m.minus.downRate * r.normaliser;
    }
    // construction-time identity: kappa_t(s) = kappa(s + gamma) - kappa(gamma)
    const Complex kg = levy_exponent(m, Complex(gamma, 0.0));
    for (int i = 0; i < 20; ++i) {
        const Complex s(0.0, 0.1 + (5.0 - 0.1) * i / 19.0);
        const Complex lhs = levy_exponent(t, s);
        const Complex rhs = levy_exponent(m, s + gamma) - kg;
        if (std::abs(lhs - rhs) > 1e-9 * (1.0 + std::abs(rhs))) {
            std::ostringstream os;
            os << "tilt_model: exponent shift identity violated at s = " << s
               << " (|diff| = " << std::abs(lhs - rhs) << ")";
            throw InternalError(os.str());
        }
    }
    return t;
}

double positive_kappa_root(const PhLevyModel& model) {
    const PhLevyModel m = thin_defects(model);
    require_up_law(m);
    if (mean_slope(m) >= 0.0)
        throw DomainError(
            "positive_kappa_root: mean slope nonnegative, no positive root");
    auto f = [&](double s) { return levy_exponent(m, Complex(s, 0.0)).real(); };

    double lo = 1e-8;
    int guard = 0;
    while (f(lo) >= 0.0 && ++guard < 60) lo *= 0.1;
    if (guard >= 60)
        throw InternalError("positive_kappa_root: cannot bracket below the root");

    double hi = std::numeric_limits<double>::quiet_NaN();
    if (m.upRate > 0.0) {
        // kappa blows up at the smallest positive pole of the up transform;
        // approach it from below until the sign flips
        const double thetaStar = -Eigen::EigenSolver<Matrix>(m.upLaw->T, false)
                                      .eigenvalues().real().maxCoeff();
        for (int k = 1; k <= 60; ++k) {
            const double cand = thetaStar * (1.0 - std::pow(2.0, -k));
            if (cand > lo && f(cand) > 0.0) { hi = cand; break; }
        }
        if (!std::isfinite(hi))
            throw DomainError(
                "positive_kappa_root: no sign change below the up-jump pole");
    } else {
        hi = 1.0;
        guard = 0;
        while (f(hi) <= 0.0) {
            hi *= 2.0;
            if (++guard > 200)
                throw DomainError("positive_kappa_root: no positive root found");
        }
    }

    double root = bracketed_root(f, lo, hi, 1e-14 * (1.0 + hi));
    for (int it = 0; it < 5; ++it) {
        const double fr = f(root);
        if (std::abs(fr) <= 1e-13) break;
        const double dr = kappa_deriv(m, root);
        if (dr == 0.0 || !std::isfinite(dr)) break;
        root -= fr / dr;
    }
    return root;
}

LadderSolution solve_tilted(const PhLevyModel& model, double a, double tol,
                            int maxIter) {
    if (a < 0.0) throw DomainError("solve_tilted: negative killing");
    if (tol <= 0.0) throw DomainError("solve_tilted: tolerance must be positive");
    const PhLevyModel m = thin_defects(model);
    require_up_law(m);
    if (mean_slope(m) >= 0.0)
        throw DomainError("solve_tilted: mean slope must be negative");
    const PathClass pc = classify_paths(m.minus);

    const double gamma = positive_kappa_root(m);
    const PhLevyModel tilted = tilt_model(m, gamma);
    // the tilted model drifts upward (kappa'(gamma) > 0 by convexity), so
    // this solve never routes back here
    const LadderSolution tsol = solve_ladder(tilted, a, tol, maxIter);

    LadderSolution sol;
    sol.killing = a;
    sol.pathCase = pc;
    sol.usedTilt = true;
    sol.iterations = tsol.iterations;
    sol.finalStep = tsol.finalStep;
    sol.stepHistory = tsol.stepHistory;
    sol.newtonPolish = tsol.newtonPolish;

    Vector k;
    if (m.upRate > 0.0) k = tilt_ph(*m.upLaw, gamma).k;

    if (pc == PathClass::General) {
        const double q = a + m.upRate;
        const GeneralBlocks b = general_blocks(m, q);
        // componentwise pull-back eta = eta~ / (s0 Delta1) with
        // s0 = Phi(q)/(Phi(q) - gamma) and Delta1 = diag(1, k); Phi(q) > gamma
        // because kappa_{X-}(gamma) < 0 < q
        const double s0 = b.phi / (b.phi - gamma);
        RowVector eta(tsol.eta.size());
        if (eta.size() > 0) eta(0) = tsol.eta(0) / s0;
        for (int i = 1; i < eta.size(); ++i)
            eta(i) = tsol.eta(i) / (s0 * k(i - 1));
        sol.eta = eta;
        sol.Qplus = b.Mplus + b.mplus * eta;
        sol.Mplus = b.Mplus;
        sol.mplus = b.mplus;
        sol.phi = b.phi;
    } else {
        RowVector eta(tsol.eta.size());
        for (int i = 0; i < eta.size(); ++i) eta(i) = tsol.eta(i) / k(i);
        sol.eta = eta;
        if (m.upRate == 0.0) {
            sol.Qplus = Matrix(0, 0);
        } else {
            sol.Qplus = m.upLaw->T + m.upLaw->exit() * eta;
        }
    }

    gate_residual(m, a, sol, tol);
    return sol;
}

} // namespace ladderkit
