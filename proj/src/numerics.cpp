#include "ladderkit/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ladderkit {

namespace {

// Pade approximant of exp at order 13 plus the lower-order shortcuts,
// following the standard scaling-and-squaring design.
const double kPadeTheta3 = 1.495585217958292e-2;
const double kPadeTheta5 = 2.539398330063230e-1;
const double kPadeTheta7 = 9.504178996162932e-1;
const double kPadeTheta9 = 2.097847961257068;
const double kPadeTheta13 = 5.371920351148152;

Matrix pade_exp(const Matrix& A, const std::vector<double>& b) {
    const auto n = A.rows();
    const Matrix I = Matrix::Identity(n, n);
    const Matrix A2 = A * A;
    // U = A * (odd coefficients), V = even coefficients
    Matrix U, V;
    if (b.size() == 14) { // order 13, Horner in A2 with a split at A6
        const Matrix A4 = A2 * A2;
        const Matrix A6 = A4 * A2;
        U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 +
                 b[5] * A4 + b[3] * A2 + b[1] * I);
        V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 +
            b[4] * A4 + b[2] * A2 + b[0] * I;
    } else {
        Matrix evenSum = b[0] * I;
        Matrix oddSum = b[1] * I;
        Matrix P = I;
        for (std::size_t k = 2; k < b.size(); k += 2) {
            P = P * A2;
            evenSum += b[k] * P;
            if (k + 1 < b.size()) oddSum += b[k + 1] * P;
        }
        U = A * oddSum;
        V = evenSum;
    }
    // solve (V - U) X = (V + U)
    return (V - U).partialPivLu().solve(V + U);
}

} // namespace

Matrix matrix_exponential(const Matrix& G, double x) {
    if (G.rows() != G.cols()) throw DomainError("matrix_exponential: non-square input");
    if (!G.allFinite() || !std::isfinite(x))
        throw DomainError("matrix_exponential: non-finite input");
    if (x < 0.0) throw DomainError("matrix_exponential: negative scale");

    const auto n = G.rows();
    Matrix A = G * x;
    const double norm = A.cwiseAbs().rowwise().sum().maxCoeff(); // inf norm

    static const std::vector<double> b3 = {120, 60, 12, 1};
    static const std::vector<double> b5 = {30240, 15120, 3360, 420, 30, 1};
    static const std::vector<double> b7 = {17297280, 8648640, 1995840, 277200,
                                           25200, 1512, 56, 1};
    static const std::vector<double> b9 = {17643225600., 8821612800., 2075673600.,
                                           302702400., 30270240., 2162160.,
                                           110880., 3960., 90., 1.};
    static const std::vector<double> b13 = {
        64764752532480000., 32382376266240000., 7771770303897600.,
        1187353796428800.,  129060195264000.,   10559470521600.,
        670442572800.,      33522128640.,       1323241920.,
        40840800.,          960960.,            16380.,
        182.,               1.};

    Matrix E;
    if (norm <= kPadeTheta3) {
        E = pade_exp(A, b3);
    } else if (norm <= kPadeTheta5) {
        E = pade_exp(A, b5);
    } else if (norm <= kPadeTheta7) {
        E = pade_exp(A, b7);
    } else if (norm <= kPadeTheta9) {
        E = pade_exp(A, b9);
    } else {
        int squarings = 0;
        if (norm > kPadeTheta13) {
            squarings = static_cast<int>(
                std::ceil(std::log2(norm / kPadeTheta13)));
            if (squarings > 60)
                throw OverflowError(
                    "matrix_exponential: ||Gx|| beyond representable range");
            A /= std::pow(2.0, squarings);
        }
        E = pade_exp(A, b13);
        for (int k = 0; k < squarings; ++k) E = E * E;
    }
    if (!E.allFinite())
        throw OverflowError("matrix_exponential: overflow in result");
    if (n == 0) return Matrix(0, 0);
    return E;
}

Matrix ph_weighted_integral(const Matrix& G, const PhaseType& ph) {
    if (G.rows() != G.cols()) throw DomainError("ph_weighted_integral: non-square G");
    const int n = static_cast<int>(G.rows());
    const int m = ph.order();
    if (m == 0) throw DomainError("ph_weighted_integral: empty phase-type law");

    // precondition: spectra of G and T must not overlap after negation,
    // i.e. every eigenvalue sum has negative real part
    const double gMax = Eigen::EigenSolver<Matrix>(G, false)
                            .eigenvalues().real().maxCoeff();
    const double tMax = Eigen::EigenSolver<Matrix>(ph.T, false)
                            .eigenvalues().real().maxCoeff();
    if (gMax + tMax >= -1e-14) {
        std::ostringstream os;
        os << "ph_weighted_integral: spectral overlap, max Re eig(G) + max Re "
              "eig(T) = " << gMax + tMax;
        throw SingularityError(os.str());
    }

    // K = G (+) T = kron(G, I_m) + kron(I_n, T), all nm x nm, dense LU
    const int nm = n * m;
    Matrix K = Matrix::Zero(nm, nm);
    for (int i = 0; i < n; ++i) {
        K.block(i * m, i * m, m, m) = ph.T;
        for (int j = 0; j < n; ++j)
            K.block(i * m, j * m, m, m).diagonal().array() += G(i, j);
    }
    // columns of (I (x) t)
    const Vector t = ph.exit();
    Matrix rhs = Matrix::Zero(nm, n);
    for (int j = 0; j < n; ++j) rhs.block(j * m, j, m, 1) = t;

    Eigen::PartialPivLU<Matrix> lu(-K);
    Matrix X = lu.solve(rhs);
    if (!X.allFinite())
        throw SingularityError("ph_weighted_integral: singular Kronecker-sum system");

    // (I (x) alpha) X
    Matrix R(n, n);
    for (int i = 0; i < n; ++i)
        R.row(i) = ph.alpha * X.block(i * m, 0, m, n);
    return R;
}

PolyRootSet real_poly_roots(const std::vector<double>& coeffs) {
    // strip high-order zeros defensively, then check degree
    std::vector<double> c = coeffs;
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg < 1) throw DomainError("real_poly_roots: degree must be >= 1");
    if (c.back() == 0.0) throw DomainError("real_poly_roots: zero leading coefficient");

    // companion matrix of the monic polynomial
    Matrix C = Matrix::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) C(i, deg - 1) = -c[i] / c[deg];

    Eigen::EigenSolver<Matrix> es(C);
    std::vector<Complex> roots(deg);
    for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()[i];

    // Newton polish against the original coefficients
    auto eval = [&](Complex z, Complex& dp) {
        Complex p = c[deg];
        dp = 0.0;
        for (int k = deg - 1; k >= 0; --k) {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        return p;
    };
    auto scaledNorm = [&](Complex z) {
        double s = 0.0, zp = 1.0;
        const double az = std::abs(z);
        for (int k = 0; k <= deg; ++k) { s += std::abs(c[k]) * zp; zp *= az; }
        return s;
    };
    for (auto& z : roots) {
        for (int it = 0; it < 8; ++it) {
            Complex dp;
            const Complex p = eval(z, dp);
            if (std::abs(p) <= 1e-14 * scaledNorm(z)) break;
            if (std::abs(dp) < 1e-300) break; // multiple root, leave to pairing
            const Complex step = p / dp;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            z -= step;
        }
    }

    // conjugate pairing: collapse imaginary noise, then enforce exact
    // symmetry on what remains
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    for (auto& z : roots)
        if (std::abs(z.imag()) <= 1e-10 * (1.0 + std::abs(z))) z = Complex(z.real(), 0.0);
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i] || roots[i].imag() == 0.0) continue;
        std::size_t best = i;
        double bestDist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (j == i || used[j] || roots[j].imag() == 0.0) continue;
            const double d = std::abs(roots[j] - std::conj(roots[i]));
            if (d < bestDist) { bestDist = d; best = j; }
        }
        if (best != i && bestDist < 1e-6 * (1.0 + std::abs(roots[i]))) {
            const Complex avg = 0.5 * (roots[i] + std::conj(roots[best]));
            roots[i] = avg;
            roots[best] = std::conj(avg);
            used[i] = used[best] = true;
        }
    }

    PolyRootSet out;
    out.roots = std::move(roots);
    return out;
}

double bracketed_root(const std::function<double(double)>& f, double lo,
                      double hi, double tol) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw DomainError("bracketed_root: no sign change on bracket");

    // secant proposal guarded by bisection, classic hybrid
    double c = a, fc = fa;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(b - a) <= tol) break;
        double mid = 0.5 * (a + b);
        double prop = mid;
        if (fb != fc && fc != fa) {
            // secant through the two most recent points
            const double s = b - fb * (b - a) / (fb - fa);
            if (s > std::min(a, b) && s < std::max(a, b)) prop = s;
        } else if (fb != fa) {
            const double s = b - fb * (b - a) / (fb - fa);
            if (s > std::min(a, b) && s < std::max(a, b)) prop = s;
        }
        c = b; fc = fb;
        const double fp = f(prop);
        if (fp == 0.0) return prop;
        if (fa * fp < 0.0) { b = prop; fb = fp; }
        else               { a = prop; fa = fp; }
    }
    return 0.5 * (a + b);
}

double poly_eval(const std::vector<double>& coeffs, double x) {
    double p = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) p = p * x + *it;
    return p;
}

Complex poly_eval(const std::vector<double>& coeffs, Complex x) {
    Complex p = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) p = p * x + *it;
    return p;
}

Matrix poly_eval(const std::vector<double>& coeffs, const Matrix& G) {
    const auto n = G.rows();
    Matrix p = Matrix::Zero(n, n);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        p = p * G;
        p.diagonal().array() += *it;
    }
    return p;
}

std::vector<double> poly_mul(const std::vector<double>& a,
                             const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<double> poly_add(const std::vector<double>& a,
                             const std::vector<double>& b) {
    std::vector<double> out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

std::vector<double> poly_scale(const std::vector<double>& a, double c) {
    std::vector<double> out = a;
    for (auto& v : out) v *= c;
    return out;
}

std::vector<double> poly_deflate(const std::vector<double>& p, double root) {
    if (p.size() < 2) throw DomainError("poly_deflate: degree must be >= 1");
    // synthetic division, quotient has degree deg-1
    const int deg = static_cast<int>(p.size()) - 1;
    std::vector<double> q(deg, 0.0);
    double carry = p[deg];
    for (int k = deg - 1; k >= 0; --k) {
        q[k] = carry;
        carry = p[k] + carry * root;
    }
    // carry is the remainder p(root); callers guarantee it is ~0
    return q;
}

CharPolyAdjugate char_poly_adjugate(const Matrix& A) {
    const int n = static_cast<int>(A.rows());
    CharPolyAdjugate out;
    if (n == 0) { out.charPoly = {1.0}; return out; }

    // Faddeev-LeVerrier: M_1 = I, c_{n-k} = -tr(A M_k)/k,
    // M_{k+1} = A M_k + c_{n-k} I; adj(sI - A) = sum_k M_{k+1} s^{n-1-k}
    out.charPoly.assign(n + 1, 0.0);
    out.charPoly[n] = 1.0;
    out.adj.assign(n, Matrix::Zero(n, n));

    Matrix M = Matrix::Identity(n, n);
    for (int k = 1; k <= n; ++k) {
        out.adj[n - k] = M;
        const Matrix AM = A * M;
        const double c = -AM.trace() / k;
        out.charPoly[n - k] = c;
        if (k < n) { M = AM; M.diagonal().array() += c; }
    }
    return out;
}

} // namespace ladderkit
