#include "ladderkit/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ladderkit {

namespace {

void require_law_present(double rate, const std::optional<PhaseType>& law,
                         const char* side) {
    if (rate < 0.0) {
        std::ostringstream os;
        os << side << " jump rate is negative";
        throw DomainError(os.str());
    }
    if (rate > 0.0 && !law) {
        std::ostringstream os;
        os << side << " jump rate positive but no jump law given";
        throw DomainError(os.str());
    }
}

SpectrallyNegativeComponent thin_snc(const SpectrallyNegativeComponent& snc) {
    SpectrallyNegativeComponent out = snc;
    if (out.downRate == 0.0) { out.downLaw.reset(); return out; }
    if (!out.downLaw) return out;
    const double mass = out.downLaw->totalMass();
    if (mass <= 0.0) { out.downRate = 0.0; out.downLaw.reset(); return out; }
    if (mass < 1.0 - 1e-15) {
        out.downRate *= mass;
        out.downLaw->alpha /= mass;
    }
    return out;
}

} // namespace

PhLevyModel thin_defects(const PhLevyModel& model) {
    PhLevyModel out = model;
    auto thin = [](double& rate, std::optional<PhaseType>& law) {
        if (rate == 0.0) { law.reset(); return; }
        if (!law) return;
        const double mass = law->totalMass();
        if (mass <= 0.0) { rate = 0.0; law.reset(); return; }
        if (mass < 1.0 - 1e-15) {
            // an atom at jump size zero moves nothing, so a defective law at
            // rate lambda equals the conditioned law at rate lambda * mass
            rate *= mass;
            law->alpha /= mass;
        }
    };
    thin(out.minus.downRate, out.minus.downLaw);
    thin(out.upRate, out.upLaw);
    return out;
}

Complex levy_exponent(const PhLevyModel& model, Complex s) {
    require_law_present(model.minus.downRate, model.minus.downLaw, "down");
    require_law_present(model.upRate, model.upLaw, "up");
    const PhLevyModel m = thin_defects(model);
    Complex k = 0.5 * m.minus.sigma2 * s * s + m.minus.drift * s;
    if (m.minus.downRate > 0.0)
        k += m.minus.downRate * (lst(*m.minus.downLaw, s) - 1.0);
    if (m.upRate > 0.0) k += m.upRate * (lst(*m.upLaw, -s) - 1.0);
    return k;
}

double minus_exponent(const SpectrallyNegativeComponent& snc, double s) {
    require_law_present(snc.downRate, snc.downLaw, "down");
    const SpectrallyNegativeComponent c = thin_snc(snc);
    double k = 0.5 * c.sigma2 * s * s + c.drift * s;
    if (c.downRate > 0.0)
        k += c.downRate * (lst(*c.downLaw, Complex(s, 0.0)).real() - 1.0);
    return k;
}

Matrix minus_exponent_matrix(const SpectrallyNegativeComponent& snc,
                             const Matrix& G) {
    require_law_present(snc.downRate, snc.downLaw, "down");
    if (G.rows() != G.cols())
        throw DomainError("minus_exponent_matrix: non-square argument");
    const SpectrallyNegativeComponent c = thin_snc(snc);
    Matrix K = 0.5 * c.sigma2 * (G * G) - c.drift * G;
    if (c.downRate > 0.0) {
        K += c.downRate * ph_weighted_integral(G, *c.downLaw);
        K.diagonal().array() -= c.downRate;
    }
    return K;
}

namespace {

// d/ds kappa_{X-}(s) = sigma2 s + c - lambda^- alpha (sI - T)^{-2} t
double minus_exponent_deriv(const SpectrallyNegativeComponent& snc, double s) {
    double d = snc.sigma2 * s + snc.drift;
    if (snc.downRate > 0.0) {
        const PhaseType& ph = *snc.downLaw;
        Matrix A = -ph.T;
        A.diagonal().array() += s;
        Eigen::PartialPivLU<Matrix> lu(A);
        const Vector x = lu.solve(ph.exit());
        const Vector y = lu.solve(x);
        d -= snc.downRate * (ph.alpha * y).value();
    }
    return d;
}

} // namespace

double phi_root(const SpectrallyNegativeComponent& snc, double q) {
    if (q < 0.0) throw DomainError("phi_root: negative level");
    if (classify_paths(snc) == PathClass::MinusIsSubordinator)
        throw DomainError(
            "phi_root: undefined when the reflected minus part is a subordinator");

    const double meanDown =
        snc.downRate > 0.0 ? snc.downRate * mean(*snc.downLaw) : 0.0;
    const double slope0 = snc.drift - meanDown;
    if (q == 0.0 && slope0 >= 0.0) return 0.0;

    auto f = [&](double s) { return minus_exponent(snc, s) - q; };

    // bracket the largest root: f < 0 somewhere right of 0, f > 0 far right
    double lo;
    if (q > 0.0) {
        lo = 0.0;
    } else {
        lo = 1e-8;
        int guard = 0;
        while (f(lo) >= 0.0 && ++guard < 60) lo *= 0.1;
        if (guard >= 60)
            throw InternalError("phi_root: failed to bracket below the root");
    }
    double hi = std::max(1.0, 2.0 * std::abs(snc.drift));
    int guard = 0;
    while (f(hi) <= 0.0) {
        hi *= 2.0;
        if (++guard > 400) throw OverflowError("phi_root: no finite root found");
    }

    double root = bracketed_root(f, lo, hi, 1e-13 * (1.0 + hi));
    // Newton polish with the analytic derivative
    for (int it = 0; it < 4; ++it) {
        const double fr = f(root);
        if (std::abs(fr) <= 1e-13 * (1.0 + std::abs(q))) break;
        const double dr = minus_exponent_deriv(snc, root);
        if (dr <= 0.0) break;
        root -= fr / dr;
    }
    return root;
}

CLRootReport cl_roots(const PhLevyModel& model, double a) {
    if (a < 0.0) throw DomainError("cl_roots: negative level");
    const PhLevyModel m = thin_defects(model);
    require_law_present(m.minus.downRate, m.minus.downLaw, "down");
    require_law_present(m.upRate, m.upLaw, "up");

    // kappa(s) - a is rational; clear both characteristic denominators.
    // With chiMinus = det(sI - T-), Nminus = alpha- adj(sI - T-) t-,
    // chiUp = det(sI + T+), Nup = alpha+ adj(sI + T+) t+ we have
    //   (kappa(s) - a) chiMinus chiUp =
    //     (sigma2/2 s^2 + c s - a - l- - l+) chiMinus chiUp
    //     + l- Nminus chiUp - l+ Nup chiMinus
    // (the up transform evaluates at -s, hence the sign on its term).
    std::vector<double> chiMinus = {1.0}, nMinus = {0.0};
    if (m.minus.downRate > 0.0) {
        const auto fl = char_poly_adjugate(m.minus.downLaw->T);
        chiMinus = fl.charPoly;
        const Vector t = m.minus.downLaw->exit();
        nMinus.assign(fl.adj.size(), 0.0);
        for (std::size_t k = 0; k < fl.adj.size(); ++k)
            nMinus[k] = (m.minus.downLaw->alpha * fl.adj[k] * t).value();
    }
    std::vector<double> chiUp = {1.0}, nUp = {0.0};
    if (m.upRate > 0.0) {
        const Matrix Aplus = -m.upLaw->T;
        const auto fl = char_poly_adjugate(Aplus);
        chiUp = fl.charPoly;
        const Vector t = m.upLaw->exit();
        nUp.assign(fl.adj.size(), 0.0);
        for (std::size_t k = 0; k < fl.adj.size(); ++k)
            nUp[k] = (m.upLaw->alpha * fl.adj[k] * t).value();
    }

    const std::vector<double> quad = {-(a + m.minus.downRate + m.upRate),
                                      m.minus.drift, 0.5 * m.minus.sigma2};
    std::vector<double> P = poly_mul(quad, poly_mul(chiMinus, chiUp));
    P = poly_add(P, poly_scale(poly_mul(nMinus, chiUp), m.minus.downRate));
    P = poly_add(P, poly_scale(poly_mul(nUp, chiMinus), -m.upRate));

    CLRootReport report;
    report.level = a;
    const PolyRootSet rs = real_poly_roots(P);
    for (const Complex& rho : rs.roots) {
        bool keep = false;
        try {
            const Complex val = levy_exponent(m, rho);
            keep = std::abs(val - a) <= 1e-8 * std::max(1.0, std::abs(a));
        } catch (const PoleError&) {
            keep = false;
        }
        if (!keep) {
            report.spurious.push_back(rho);
        } else if (rho.real() > 1e-9) {
            report.positiveRoots.push_back(rho);
        } else {
            report.otherRoots.push_back(rho);
        }
    }
    auto byReal = [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    };
    std::sort(report.positiveRoots.begin(), report.positiveRoots.end(), byReal);
    std::sort(report.otherRoots.begin(), report.otherRoots.end(), byReal);
    return report;
}

PathClass classify_paths(const SpectrallyNegativeComponent& snc) {
    require_law_present(snc.downRate, snc.downLaw, "down");
    if (snc.sigma2 < 0.0) throw DomainError("classify_paths: negative sigma2");
    if (snc.sigma2 == 0.0 && snc.downRate == 0.0 && snc.drift < 0.0)
        throw DomainError(
            "excluded case: the minus component is a negative deterministic drift");
    if (snc.sigma2 == 0.0 && snc.drift <= 0.0)
        return PathClass::MinusIsSubordinator;
    return PathClass::General;
}

double mean_slope(const PhLevyModel& model) {
    require_law_present(model.minus.downRate, model.minus.downLaw, "down");
    require_law_present(model.upRate, model.upLaw, "up");
    double slope = model.minus.drift;
    if (model.minus.downRate > 0.0)
        slope -= model.minus.downRate * mean(*model.minus.downLaw);
    if (model.upRate > 0.0) slope += model.upRate * mean(*model.upLaw);
    return slope;
}

// ---------------------------------------------------------------------------
// Hyperexponential tail fitting for approximate()
// ---------------------------------------------------------------------------

namespace {

// Lawson-Hanson nonnegative least squares: min ||Ax - b|| s.t. x >= 0
Vector nnls(const Matrix& A, const Vector& b) {
    const int n = static_cast<int>(A.cols());
    Vector x = Vector::Zero(n);
    std::vector<bool> inP(n, false);
    const double tol = 1e-12 * A.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff();

    for (int outer = 0; outer < 4 * n + 16; ++outer) {
        const Vector w = A.transpose() * (b - A * x);
        int j = -1;
        double wMax = tol;
        for (int i = 0; i < n; ++i)
            if (!inP[i] && w(i) > wMax) { wMax = w(i); j = i; }
        if (j < 0) break;
        inP[j] = true;

        for (int inner = 0; inner < 4 * n + 16; ++inner) {
            std::vector<int> idx;
            for (int i = 0; i < n; ++i)
                if (inP[i]) idx.push_back(i);
            Matrix Ap(A.rows(), idx.size());
            for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(k) = A.col(idx[k]);
            const Vector z = Ap.colPivHouseholderQr().solve(b);

            bool allPos = true;
            for (std::size_t k = 0; k < idx.size(); ++k)
                if (z(k) <= 0.0) { allPos = false; break; }
            if (allPos) {
                x.setZero();
                for (std::size_t k = 0; k < idx.size(); ++k) x(idx[k]) = z(k);
                break;
            }
            // step back along the segment to the first zero crossing
            double step = 1.0;
            for (std::size_t k = 0; k < idx.size(); ++k) {
                if (z(k) <= 0.0) {
                    const double xi = x(idx[k]);
                    const double s = xi / (xi - z(k));
                    step = std::min(step, s);
                }
            }
            for (std::size_t k = 0; k < idx.size(); ++k) {
                x(idx[k]) += step * (z(k) - x(idx[k]));
                if (x(idx[k]) <= 1e-14) { x(idx[k]) = 0.0; inP[idx[k]] = false; }
            }
        }
    }
    return x;
}

struct TailFit {
    PhaseType law;
    double residual = 0.0;
};

// Fit a mixture of exponentials to survival targets S_i at points x_i.
TailFit fit_hyperexp(const std::vector<double>& xs,
                     const std::vector<double>& survs, int budget) {
    const int n = static_cast<int>(xs.size());

    // anchor rate from the log-survival regression through the origin;
    // exact when the tail is a single exponential
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        num += xs[i] * std::log(1.0 / survs[i]);
        den += xs[i] * xs[i];
    }
    const double r0 = std::max(num / den, 1e-12);

    // dictionary of candidate rates around the anchor, half-octave spacing
    std::vector<double> rates;
    for (int k = -8; k <= 8; ++k) rates.push_back(r0 * std::pow(2.0, 0.5 * k));

    auto design = [&](const std::vector<double>& rr) {
        Matrix M(n, rr.size());
        for (int i = 0; i < n; ++i)
            for (std::size_t j = 0; j < rr.size(); ++j)
                M(i, j) = std::exp(-rr[j] * xs[i]);
        return M;
    };
    Vector target(n);
    for (int i = 0; i < n; ++i) target(i) = survs[i];

    Vector w = nnls(design(rates), target);

    // prune to the phase budget, largest weights first, then refit
    std::vector<int> active;
    for (std::size_t j = 0; j < rates.size(); ++j)
        if (w(j) > 0.0) active.push_back(static_cast<int>(j));
    if (static_cast<int>(active.size()) > budget) {
        std::sort(active.begin(), active.end(),
                  [&](int p, int q) { return w(p) > w(q); });
        active.resize(budget);
    }
    std::vector<double> keptRates;
    for (int j : active) keptRates.push_back(rates[j]);
    if (keptRates.empty()) keptRates.push_back(r0);
    Vector wk = nnls(design(keptRates), target);

    // assemble, dropping zero weights, and renormalise to a proper law
    std::vector<double> wFinal, rFinal;
    for (std::size_t j = 0; j < keptRates.size(); ++j) {
        if (wk(j) > 0.0) { wFinal.push_back(wk(j)); rFinal.push_back(keptRates[j]); }
    }
    if (wFinal.empty()) { wFinal.push_back(1.0); rFinal.push_back(r0); }
    const double wSum = std::accumulate(wFinal.begin(), wFinal.end(), 0.0);

    TailFit fit;
    const int mFit = static_cast<int>(wFinal.size());
    fit.law.alpha = RowVector(mFit);
    fit.law.T = Matrix::Zero(mFit, mFit);
    for (int j = 0; j < mFit; ++j) {
        fit.law.alpha(j) = wFinal[j] / wSum;
        fit.law.T(j, j) = -rFinal[j];
    }
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < mFit; ++j)
            s += fit.law.alpha(j) * std::exp(-rFinal[j] * xs[i]);
        fit.residual = std::max(fit.residual, std::abs(s - survs[i]));
    }
    return fit;
}

} // namespace

PhLevyModel approximate(const LevyMeasureSpec& nu, double eps, int phaseBudget,
                        ApproxDiagnostics* diag) {
    if (eps <= 0.0) throw DomainError("approximate: eps must be positive");
    if (phaseBudget < 1) throw DomainError("approximate: phase budget must be >= 1");

    // survival levels, log-spaced; x_i is the excess-law quantile at 1 - S_i
    const int gridN = 40;
    std::vector<double> levels(gridN);
    const double lo = std::log(0.999), hi = std::log(0.002);
    for (int i = 0; i < gridN; ++i)
        levels[i] = std::exp(lo + (hi - lo) * i / (gridN - 1.0));

    PhLevyModel out;
    out.minus.drift = nu.drift();
    out.minus.sigma2 = nu.sigma2();

    auto fitSide = [&](double mass, auto quantile, double& residualOut,
                       std::vector<std::string>& warnings, const char* side)
        -> std::optional<PhaseType> {
        if (mass <= 1e-14) { residualOut = 0.0; return std::nullopt; }
        std::vector<double> xs, survs;
        for (double S : levels) {
            const double x = quantile(1.0 - S);
            if (x > 0.0 && std::isfinite(x)) { xs.push_back(x); survs.push_back(S); }
        }
        if (xs.size() < 4)
            throw DomainError("approximate: excess quantile grid degenerate");
        TailFit fit = fit_hyperexp(xs, survs, phaseBudget);
        residualOut = fit.residual;
        if (fit.residual > 1e-2) {
            std::ostringstream os;
            os << side << " tail fit residual " << fit.residual
               << " exceeds 1e-2 on the survival grid";
            warnings.push_back(os.str());
        }
        return fit.law;
    };

    ApproxDiagnostics local;
    ApproxDiagnostics& d = diag ? *diag : local;
    d.warnings.clear();

    out.upRate = nu.tail_mass_up(eps);
    out.upLaw = fitSide(out.upRate,
                        [&](double p) { return nu.up_excess_quantile(eps, p); },
                        d.upResidual, d.warnings, "up");
    if (!out.upLaw) out.upRate = 0.0;

    out.minus.downRate = nu.tail_mass_down(eps);
    out.minus.downLaw =
        fitSide(out.minus.downRate,
                [&](double p) { return nu.down_excess_quantile(eps, p); },
                d.downResidual, d.warnings, "down");
    if (!out.minus.downLaw) out.minus.downRate = 0.0;

    return out;
}

} // namespace ladderkit
