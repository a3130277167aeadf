#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "ladderkit/errors.hpp"
#include "ladderkit/numerics.hpp"
#include "test_util.hpp"

using namespace ladderkit;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace

// ---------------------------------------------------------------------------
// matrix_exponential
// ---------------------------------------------------------------------------

TEST_CASE("matrix exponential: scalar case matches exp") {
    const Matrix G = Matrix::Constant(1, 1, 2.0);
    CHECK(matrix_exponential(G)(0, 0) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
    CHECK(matrix_exponential(G, 0.5)(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
}

TEST_CASE("matrix exponential: nilpotent block is exact") {
    Matrix G = Matrix::Zero(2, 2);
    G(0, 1) = 1.0;
    const Matrix E = matrix_exponential(G);
    CHECK(E(0, 0) == doctest::Approx(1.0));
    CHECK(E(0, 1) == doctest::Approx(1.0));
    CHECK(E(1, 0) == doctest::Approx(0.0));
    CHECK(E(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("matrix exponential: rotation generator gives cos/sin") {
    Matrix G = Matrix::Zero(2, 2);
    G(0, 1) = -1.0;
    G(1, 0) = 1.0;
    const double theta = 0.7;
    const Matrix E = matrix_exponential(G, theta);
    CHECK(E(0, 0) == doctest::Approx(std::cos(theta)).epsilon(1e-13));
    CHECK(E(0, 1) == doctest::Approx(-std::sin(theta)).epsilon(1e-13));
    CHECK(E(1, 0) == doctest::Approx(std::sin(theta)).epsilon(1e-13));
    CHECK(E(1, 1) == doctest::Approx(std::cos(theta)).epsilon(1e-13));
}

TEST_CASE("matrix exponential: exp(A) exp(-A) = I, large norm path") {
    Matrix A(3, 3);
    A << 4.0, -2.0, 1.0,
         0.5,  3.0, -1.0,
        -2.0,  1.0,  5.0; // norm above the order-13 threshold forces squaring
    const Matrix P = matrix_exponential(A) * matrix_exponential(A * -1.0);
    CHECK(max_abs_diff(P, Matrix::Identity(3, 3)) <= 1e-10);
}

TEST_CASE("matrix exponential: scale argument equals pre-scaled generator") {
    Matrix A(2, 2);
    A << -1.2, 0.4,
          0.3, -0.8;
    CHECK(max_abs_diff(matrix_exponential(A, 2.5), matrix_exponential(A * 2.5)) <= 1e-13);
}

TEST_CASE("matrix exponential: overflow is reported, not returned") {
    CHECK_THROWS_AS(matrix_exponential(Matrix::Constant(1, 1, 800.0)), OverflowError);
    CHECK_THROWS_AS(matrix_exponential(Matrix::Constant(1, 1, 1e40)), OverflowError);
}

// ---------------------------------------------------------------------------
// ph_weighted_integral
// ---------------------------------------------------------------------------

TEST_CASE("ph weighted integral: scalar exponential closed form r/(g+r)") {
    const Matrix G = Matrix::Constant(1, 1, -2.0);
    const Matrix R = ph_weighted_integral(G, testutil::expph(3.0));
    CHECK(R(0, 0) == doctest::Approx(3.0 / 5.0).epsilon(1e-13));
}

TEST_CASE("ph weighted integral: scalar case equals the law's transform") {
    // int e^{-gy} f(y) dy is the Laplace transform of the density at g
    const double g = 1.3;
    const Matrix G = Matrix::Constant(1, 1, -g);
    const PhaseType erl = testutil::erlang2(2.0);
    const Matrix R = ph_weighted_integral(G, erl);
    const Complex viaLst = lst(erl, Complex(g, 0.0));
    CHECK(R(0, 0) == doctest::Approx(viaLst.real()).epsilon(1e-13));
    CHECK(R(0, 0) == doctest::Approx(std::pow(2.0 / 3.3, 2)).epsilon(1e-13));
}

TEST_CASE("ph weighted integral: matrix case matches quadrature entrywise") {
    Matrix G(2, 2);
    G << -1.0, 0.5,
          0.2, -2.0;
    const PhaseType ph = testutil::hyperexp(0.4, 1.0, 3.0);
    const Matrix R = ph_weighted_integral(G, ph);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double quad = testutil::simpson(
                [&](double y) {
                    return matrix_exponential(G, y)(i, j) * density(ph, y);
                },
                1e-9, 40.0, 4000);
            CHECK(R(i, j) == doctest::Approx(quad).epsilon(1e-7));
        }
    }
}

TEST_CASE("ph weighted integral: spectral overlap is rejected") {
    const Matrix G = Matrix::Constant(1, 1, 2.0); // 2 - 1 >= 0, divergent integral
    CHECK_THROWS_AS(ph_weighted_integral(G, testutil::expph(1.0)), SingularityError);
}

// ---------------------------------------------------------------------------
// real_poly_roots
// ---------------------------------------------------------------------------

TEST_CASE("poly roots: cubic with three real roots") {
    // s^3 - s^2 - 4s + 2
    const PolyRootSet rs = real_poly_roots({2.0, -4.0, -1.0, 1.0});
    REQUIRE(rs.roots.size() == 3);
    std::vector<double> re;
    for (const Complex& z : rs.roots) {
        CHECK(std::abs(z.imag()) <= 1e-12);
        re.push_back(z.real());
    }
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-1.813606502648331).epsilon(1e-11));
    CHECK(re[1] == doctest::Approx(0.4706834198711606).epsilon(1e-11));
    CHECK(re[2] == doctest::Approx(2.34292308277717).epsilon(1e-11));
}

TEST_CASE("poly roots: double root is found twice") {
    // (s - 1)^2 = s^2 - 2s + 1
    const PolyRootSet rs = real_poly_roots({1.0, -2.0, 1.0});
    REQUIRE(rs.roots.size() == 2);
    for (const Complex& z : rs.roots) {
        CHECK(std::abs(z - Complex(1.0, 0.0)) <= 1e-6);
    }
}

TEST_CASE("poly roots: conjugate pair is exactly symmetric") {
    // s^2 + 1
    const PolyRootSet rs = real_poly_roots({1.0, 0.0, 1.0});
    REQUIRE(rs.roots.size() == 2);
    CHECK(rs.roots[0] == std::conj(rs.roots[1]));
    CHECK(std::abs(std::abs(rs.roots[0].imag()) - 1.0) <= 1e-12);
    CHECK(rs.roots[0].real() == 0.0);
}

TEST_CASE("poly roots: degenerate degree is rejected") {
    CHECK_THROWS_AS(real_poly_roots({3.0}), DomainError);
    CHECK_THROWS_AS(real_poly_roots({3.0, 0.0}), DomainError);
}

// ---------------------------------------------------------------------------
// bracketed_root
// ---------------------------------------------------------------------------

TEST_CASE("bracketed root: cosine root at pi/2") {
    const double r = bracketed_root([](double x) { return std::cos(x); }, 1.0, 2.0);
    CHECK(r == doctest::Approx(std::acos(-1.0) / 2.0).epsilon(1e-11));
}

TEST_CASE("bracketed root: endpoints that are roots are returned") {
    CHECK(bracketed_root([](double x) { return x - 1.0; }, 1.0, 2.0) == 1.0);
}

TEST_CASE("bracketed root: missing sign change is rejected") {
    CHECK_THROWS_AS(
        bracketed_root([](double x) { return std::cos(x); }, 0.0, 1.0),
        DomainError);
}

// ---------------------------------------------------------------------------
// polynomial toolkit
// ---------------------------------------------------------------------------

TEST_CASE("poly toolkit: multiply, add, scale, evaluate") {
    const std::vector<double> p = poly_mul({-1.0, 1.0}, {-2.0, 1.0}); // (s-1)(s-2)
    REQUIRE(p.size() == 3);
    CHECK(p[0] == doctest::Approx(2.0));
    CHECK(p[1] == doctest::Approx(-3.0));
    CHECK(p[2] == doctest::Approx(1.0));
    CHECK(poly_eval(p, 3.0) == doctest::Approx(2.0));
    CHECK(std::abs(poly_eval(p, Complex(0.0, 1.0)) - Complex(1.0, -3.0)) <= 1e-14);

    const std::vector<double> s = poly_add(poly_scale(p, 2.0), {1.0});
    CHECK(poly_eval(s, 3.0) == doctest::Approx(5.0));
}

TEST_CASE("poly toolkit: matrix evaluation matches direct arithmetic") {
    Matrix G(2, 2);
    G << 1.0, 1.0,
         0.0, 1.0;
    // p(s) = s^2 - 3s + 2
    const Matrix P = poly_eval(std::vector<double>{2.0, -3.0, 1.0}, G);
    const Matrix direct = G * G - 3.0 * G + 2.0 * Matrix::Identity(2, 2);
    CHECK(max_abs_diff(P, direct) <= 1e-14);
}

TEST_CASE("poly toolkit: deflation by a known root") {
    const std::vector<double> q = poly_deflate({2.0, -3.0, 1.0}, 1.0); // / (s-1)
    REQUIRE(q.size() == 2);
    CHECK(q[0] == doctest::Approx(-2.0));
    CHECK(q[1] == doctest::Approx(1.0));
}

// ---------------------------------------------------------------------------
// char_poly_adjugate
// ---------------------------------------------------------------------------

TEST_CASE("char poly adjugate: 2x2 closed form and adjugate identity") {
    Matrix A(2, 2);
    A << 1.0, 2.0,
         3.0, 4.0;
    const CharPolyAdjugate cpa = char_poly_adjugate(A);
    REQUIRE(cpa.charPoly.size() == 3);
    CHECK(cpa.charPoly[0] == doctest::Approx(-2.0)); // det(sI-A) = s^2 - 5s - 2
    CHECK(cpa.charPoly[1] == doctest::Approx(-5.0));
    CHECK(cpa.charPoly[2] == doctest::Approx(1.0));

    // adj(sI - A) (sI - A) = det(sI - A) I at a generic point
    const double s = 2.0;
    const Matrix adjS = cpa.adj[0] + s * cpa.adj[1];
    const Matrix lhs = adjS * (s * Matrix::Identity(2, 2) - A);
    const double det = poly_eval(cpa.charPoly, s);
    CHECK(max_abs_diff(lhs, det * Matrix::Identity(2, 2)) <= 1e-12);
}

TEST_CASE("char poly adjugate: 3x3 identity on a random-ish matrix") {
    Matrix A(3, 3);
    A << 0.3, -1.1, 0.7,
         2.0,  0.4, -0.2,
        -0.5,  1.3, 1.8;
    const CharPolyAdjugate cpa = char_poly_adjugate(A);
    for (double s : {0.0, 1.0, -2.5}) {
        Matrix adjS = Matrix::Zero(3, 3);
        double sp = 1.0;
        for (int j = 0; j < 3; ++j) { adjS += sp * cpa.adj[j]; sp *= s; }
        const Matrix lhs = adjS * (s * Matrix::Identity(3, 3) - A);
        const double det = poly_eval(cpa.charPoly, s);
        CHECK(max_abs_diff(lhs, det * Matrix::Identity(3, 3)) <= 1e-10);
    }
}
