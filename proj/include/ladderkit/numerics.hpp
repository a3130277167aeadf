#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "ladderkit/phasetype.hpp"

namespace ladderkit {

// ---------------------------------------------------------------------------
// Dense matrix and root-finding primitives shared by every other module.
// All operations are pure functions over values; thread-safe by construction.
// ---------------------------------------------------------------------------

/// exp(G*x) by scaling-and-squaring with diagonal Pade approximants (orders
/// 3/5/7/9/13 chosen by norm). Throws OverflowError when the result leaves
/// the representable range.
Matrix matrix_exponential(const Matrix& G, double x = 1.0);

/// Exact value of the jump integral  int_0^inf e^{Gy} f(y) dy  for a
/// phase-type density f = alpha e^{Ty} t, computed as
/// (I (x) alpha) * (-(G (+) T))^{-1} * (I (x) t) via one dense Kronecker-sum
/// LU solve. Precondition: max Re eig(G) + max Re eig(T) < 0; violation
/// throws SingularityError("spectral overlap ...").
Matrix ph_weighted_integral(const Matrix& G, const PhaseType& ph);

/// Root set of a real polynomial, with multiplicity.
struct PolyRootSet {
    std::vector<Complex> roots;
};

/// All complex roots of sum_k coeffs[k] s^k (ascending powers, leading
/// coefficient nonzero, degree >= 1) via companion-matrix eigenvalues, each
/// polished by Newton steps and paired by conjugate symmetry so that
/// imaginary noise below 1e-10 is removed.
PolyRootSet real_poly_roots(const std::vector<double>& coeffs);

/// Root of f on [lo, hi] with f(lo) f(hi) <= 0, to absolute tolerance tol,
/// by a safeguarded secant/bisection hybrid. Throws DomainError when the
/// bracket carries no sign change.
double bracketed_root(const std::function<double(double)>& f, double lo,
                      double hi, double tol = 1e-12);

// --- small polynomial toolkit (ascending coefficient order) ----------------

double poly_eval(const std::vector<double>& coeffs, double x);
Complex poly_eval(const std::vector<double>& coeffs, Complex x);
Matrix poly_eval(const std::vector<double>& coeffs, const Matrix& G);
std::vector<double> poly_mul(const std::vector<double>& a,
                             const std::vector<double>& b);
std::vector<double> poly_add(const std::vector<double>& a,
                             const std::vector<double>& b);
std::vector<double> poly_scale(const std::vector<double>& a, double c);

/// Divides p by (s - root) assuming p(root) = 0 (synthetic division); the
/// remainder is discarded, so callers must pass a genuine root.
std::vector<double> poly_deflate(const std::vector<double>& p, double root);

/// Characteristic polynomial det(sI - A) (ascending coefficients) together
/// with the matrix coefficients of adj(sI - A) = sum_j adj[j] s^j, by the
/// Faddeev-LeVerrier recurrence. Exact for the small orders used here.
struct CharPolyAdjugate {
    std::vector<double> charPoly;  ///< degree n, ascending, leading 1
    std::vector<Matrix> adj;       ///< n matrices, adj[j] multiplies s^j
};
CharPolyAdjugate char_poly_adjugate(const Matrix& A);

} // namespace ladderkit
