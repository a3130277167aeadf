#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "ladderkit/errors.hpp"
#include "ladderkit/phasetype.hpp"
#include "test_util.hpp"

using namespace ladderkit;

namespace {

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
    for (const std::string& s : issues)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

TEST_CASE("validate: proper laws pass cleanly") {
    CHECK(validate(testutil::expph(1.0)).empty());
    CHECK(validate(testutil::erlang2(2.0)).empty());
    CHECK(validate(testutil::hyperexp(0.4, 1.0, 3.0)).empty());
}

TEST_CASE("validate: each invariant violation is named") {
    PhaseType ph = testutil::expph(1.0);
    ph.alpha(0) = -0.2;
    CHECK(mentions(validate(ph), "negative initial probability"));

    ph = testutil::expph(1.0);
    ph.alpha(0) = 1.5;
    CHECK(mentions(validate(ph), "initial mass exceeds 1"));

    ph = testutil::expph(1.0);
    ph.T(0, 0) = 0.5;
    CHECK(mentions(validate(ph), "not strictly negative"));

    ph = testutil::erlang2(1.0);
    ph.T(0, 1) = -0.5;
    CHECK(mentions(validate(ph), "off-diagonal"));

    ph = testutil::erlang2(1.0);
    ph.T(0, 1) = 2.0; // row sum +1
    CHECK(mentions(validate(ph), "not subintensity"));

    PhaseType empty;
    empty.alpha = RowVector(0);
    empty.T = Matrix(0, 0);
    CHECK(mentions(validate(empty), "empty representation"));
}

// ---------------------------------------------------------------------------
// cdf / density
// ---------------------------------------------------------------------------

TEST_CASE("cdf: exponential closed form") {
    const PhaseType ph = testutil::expph(1.0);
    CHECK(cdf(ph, 0.0) == doctest::Approx(0.0));
    CHECK(cdf(ph, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(cdf(ph, -0.5), DomainError);
}

TEST_CASE("cdf: defective law carries its zero atom") {
    PhaseType ph = testutil::expph(1.0);
    ph.alpha(0) = 0.6;
    CHECK(cdf(ph, 0.0) == doctest::Approx(0.4));
    CHECK(cdf(ph, 2.0) == doctest::Approx(1.0 - 0.6 * std::exp(-2.0)).epsilon(1e-13));
}

TEST_CASE("cdf: Erlang-2 closed form") {
    const PhaseType ph = testutil::erlang2(1.0);
    // F(x) = 1 - (1 + x) e^{-x}
    CHECK(cdf(ph, 2.0) == doctest::Approx(0.5939941502901619).epsilon(1e-13));
}

TEST_CASE("density: integrates to the representation mass") {
    PhaseType ph = testutil::hyperexp(0.4, 1.0, 3.0);
    ph.alpha *= 0.7; // defective
    const double mass = testutil::simpson([&](double x) { return density(ph, x); },
                                          1e-10, 50.0, 6000);
    CHECK(mass == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(density(ph, 0.5) > 0.0);
}

// ---------------------------------------------------------------------------
// lst / mean
// ---------------------------------------------------------------------------

TEST_CASE("lst: exponential transform and pole") {
    const PhaseType ph = testutil::expph(1.0);
    CHECK(lst(ph, Complex(2.0, 0.0)).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(lst(ph, Complex(0.0, 0.0)).real() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(lst(ph, Complex(-1.0, 0.0)), PoleError);
}

TEST_CASE("lst: imaginary argument agrees with quadrature") {
    const PhaseType ph = testutil::erlang2(2.0);
    const Complex s(0.0, 1.5);
    const Complex viaSolve = lst(ph, s);
    const double re = testutil::simpson(
        [&](double x) { return std::cos(1.5 * x) * density(ph, x); }, 1e-10, 40.0, 4000);
    const double im = testutil::simpson(
        [&](double x) { return -std::sin(1.5 * x) * density(ph, x); }, 1e-10, 40.0, 4000);
    CHECK(viaSolve.real() == doctest::Approx(re).epsilon(1e-7));
    CHECK(viaSolve.imag() == doctest::Approx(im).epsilon(1e-7));
}

TEST_CASE("mean: closed forms") {
    CHECK(mean(testutil::expph(2.0)) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(mean(testutil::erlang2(3.0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(mean(testutil::hyperexp(0.4, 1.0, 3.0)) == doctest::Approx(0.6).epsilon(1e-13));
}

// ---------------------------------------------------------------------------
// tilt_ph
// ---------------------------------------------------------------------------

TEST_CASE("tilt: exponential tilts to the shifted rate") {
    const TiltResult tr = tilt_ph(testutil::expph(1.0), 0.5);
    CHECK(tr.normaliser == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(tr.k(0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(tr.law.alpha(0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(tr.law.T(0, 0) == doctest::Approx(-0.5).epsilon(1e-13));
}

TEST_CASE("tilt: Erlang normaliser is the transform at minus theta") {
    const PhaseType ph = testutil::erlang2(1.0);
    const TiltResult tr = tilt_ph(ph, 0.8);
    CHECK(tr.normaliser == doctest::Approx(25.0).epsilon(1e-11)); // (1/0.2)^2
    CHECK(tr.normaliser ==
          doctest::Approx(lst(ph, Complex(-0.8, 0.0)).real()).epsilon(1e-11));
    CHECK(validate(tr.law).empty());
}

TEST_CASE("tilt: transform identity holds off the construction grid") {
    const PhaseType ph = testutil::hyperexp(0.4, 1.0, 3.0);
    const double theta = 0.6;
    const TiltResult tr = tilt_ph(ph, theta);
    for (double s : {0.35, 1.7, 4.2}) {
        const Complex lhs = lst(tr.law, Complex(s, 0.0));
        const Complex rhs = lst(ph, Complex(s - theta, 0.0)) / tr.normaliser;
        CHECK(std::abs(lhs - rhs) <= 1e-11 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("tilt: reaching the decay rate is rejected") {
    CHECK_THROWS_AS(tilt_ph(testutil::expph(1.0), 1.0), DomainError);
    CHECK_THROWS_AS(tilt_ph(testutil::expph(1.0), 1.7), DomainError);
    CHECK_THROWS_AS(tilt_ph(testutil::hyperexp(0.4, 1.0, 3.0), 1.0), DomainError);
}
