#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ladderkit/errors.hpp"
#include "ladderkit/fluctuation.hpp"
#include "ladderkit/simulate.hpp"
#include "test_util.hpp"

using namespace ladderkit;

namespace {

const double kEtaSumA = 0.44861247545167954; // sum eta_1 for the diffusion model
const double kRho1A = 0.4706834198711606;    // positive roots at a = 1
const double kRho2A = 2.34292308277717;

} // namespace

// ---------------------------------------------------------------------------
// Wiener-Hopf factors, two routes
// ---------------------------------------------------------------------------

TEST_CASE("wh factors: root route equals matrix route on the imaginary axis") {
    const PhLevyModel m = testutil::model_a();
    for (int i = 1; i <= 10; ++i) {
        const Complex s(0.0, 0.3 * i);
        const Complex viaRoots = wh_plus_roots(m, 1.0, s);
        const Complex viaMatrix = wh_plus_matrix(m, 1.0, s);
        CHECK(std::abs(viaRoots - viaMatrix) <= 1e-8);
        CHECK(std::abs(viaRoots) <= 1.0 + 1e-12); // transform of a positive law
    }
}

TEST_CASE("wh factors: both routes at a real point, frozen value") {
    const PhLevyModel m = testutil::model_a();
    const Complex s(-1.0, 0.0);
    CHECK(wh_plus_roots(m, 1.0, s).real() ==
          doctest::Approx(kEtaSumA).epsilon(1e-10));
    CHECK(wh_plus_matrix(m, 1.0, s).real() ==
          doctest::Approx(kEtaSumA).epsilon(1e-10));
    // at s = 0 both routes give the total mass 1
    CHECK(std::abs(wh_plus_roots(m, 1.0, Complex(0.0, 0.0)) - 1.0) <= 1e-12);
    CHECK(std::abs(wh_plus_matrix(m, 1.0, Complex(0.0, 0.0)) - 1.0) <= 1e-10);
}

TEST_CASE("wh factors: subordinator case matrix route carries the atom") {
    const PhLevyModel m = testutil::model_b();
    const double eta = 1.0 - 1.0 / std::sqrt(3.0);
    // E[e^{-M}] = (1 - eta) + eta (1/sqrt3)/(1 + 1/sqrt3) = sqrt(3) - 1
    CHECK(wh_plus_matrix(m, 1.0, Complex(-1.0, 0.0)).real() ==
          doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-10));
    CHECK(std::abs(wh_plus_matrix(m, 1.0, Complex(0.0, 0.0)) - 1.0) <= 1e-10);
    (void)eta;
}

TEST_CASE("wh factors: factorisation identity and modulus bounds") {
    for (const PhLevyModel& m : {testutil::model_a(), testutil::model_b_neg()}) {
        for (int i = 1; i <= 8; ++i) {
            const Complex s(0.0, 0.4 * i);
            const Complex plus = wh_plus_matrix(m, 1.0, s);
            const Complex minus = wh_minus(m, 1.0, s);
            const Complex kappa = levy_exponent(m, s);
            const Complex product = plus * minus * (1.0 - kappa) / 1.0;
            CHECK(std::abs(product - 1.0) <= 1e-10);
            CHECK(std::abs(plus) <= 1.0 + 1e-12);
            CHECK(std::abs(minus) <= 1.0 + 1e-12);
        }
    }
}

// ---------------------------------------------------------------------------
// supremum law / first passage / ladder phases / overshoot
// ---------------------------------------------------------------------------

TEST_CASE("sup law: general case is phase-type from the regulated state") {
    const AtomPlusPhaseType law = sup_law(testutil::model_a(), 1.0);
    CHECK(law.atom0 == doctest::Approx(0.0));
    REQUIRE(law.tail.has_value());
    CHECK(law.tail->alpha(0) == doctest::Approx(1.0));
    CHECK(law.tail->alpha(1) == doctest::Approx(0.0));
    CHECK(law.tail->T.rows() == 2);
}

TEST_CASE("sup law: subordinator case splits mass between atom and tail") {
    const AtomPlusPhaseType law = sup_law(testutil::model_b(), 1.0);
    const double eta = 1.0 - 1.0 / std::sqrt(3.0);
    CHECK(law.atom0 == doctest::Approx(1.0 - eta).epsilon(1e-10));
    REQUIRE(law.tail.has_value());
    CHECK(law.tail->alpha(0) == doctest::Approx(eta).epsilon(1e-10));
    CHECK(law.totalMass() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sup law: subordinator tail is confirmed by simulation") {
    // the tail formula eta e^{Q+ k} 1 is a derived identity; gate it against
    // the path oracle before trusting it anywhere else
    const PhLevyModel m = testutil::model_b();
    SimConfig cfg;
    cfg.paths = 20000;
    cfg.seed = 20240817;
    cfg.qRate = 1.0;
    const std::vector<double> sups = simulate_sup(m, cfg);
    const AtomPlusPhaseType law = sup_law(m, cfg.qRate);
    for (double k : {0.3, 1.0}) {
        double hits = 0.0;
        for (double v : sups)
            if (v > k) hits += 1.0;
        const double n = static_cast<double>(sups.size());
        const double mc = hits / n;
        const double se = std::sqrt(std::max(mc * (1.0 - mc), 1e-12) / n);
        const double analytic =
            (law.tail->alpha * matrix_exponential(law.tail->T, k)).sum();
        CHECK(std::abs(mc - analytic) <= 4.0 * se);
    }
}

TEST_CASE("first passage: Brownian exponential decay") {
    const PhLevyModel m = testutil::bm_model();
    for (double q : {1.0, 2.0}) {
        for (double k : {0.0, 0.4, 1.3}) {
            CHECK(first_passage_lt(m, q, k) ==
                  doctest::Approx(std::exp(-std::sqrt(2.0 * q) * k)).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(first_passage_lt(m, 1.0, -0.1), DomainError);
}

TEST_CASE("first passage: level zero gives the crossing mass") {
    // general case crosses immediately; subordinator case only with the tail
    CHECK(first_passage_lt(testutil::model_a(), 1.0, 0.0) == doctest::Approx(1.0));
    CHECK(first_passage_lt(testutil::model_b(), 1.0, 0.0) ==
          doctest::Approx(1.0 - 1.0 / std::sqrt(3.0)).epsilon(1e-10));
}

TEST_CASE("ladder phase: starts regulated, masses to the passage transform") {
    const PhLevyModel m = testutil::model_a();
    const RowVector v0 = ladder_phase(m, 1.0, 0.0);
    CHECK(v0(0) == doctest::Approx(1.0));
    CHECK(v0(1) == doctest::Approx(0.0));
    for (double k : {0.3, 1.1}) {
        const RowVector v = ladder_phase(m, 1.0, k);
        CHECK(v.sum() == doctest::Approx(first_passage_lt(m, 1.0, k)).epsilon(1e-12));
        CHECK(v.minCoeff() >= 0.0);
    }
    CHECK_THROWS_AS(ladder_phase(testutil::model_b(), 1.0, 0.5), DomainError);
}

TEST_CASE("overshoot law: creep atom plus memoryless jump tail") {
    const PhLevyModel m = testutil::model_a();
    const double q = 1.0, k = 0.5;
    const AtomPlusPhaseType law = overshoot_law(m, q, k);
    const RowVector v = ladder_phase(m, q, k);
    CHECK(law.atom0 == doctest::Approx(v(0)));
    REQUIRE(law.tail.has_value());
    // Exp(1) jumps: the conditional overshoot is Exp(1) at any level
    CHECK(law.tail->T(0, 0) == doctest::Approx(-1.0));
    CHECK(law.totalMass() ==
          doctest::Approx(first_passage_lt(m, q, k)).epsilon(1e-12));
    CHECK_THROWS_AS(overshoot_law(m, q, 0.0), DomainError);
}

// ---------------------------------------------------------------------------
// joint transform identity
// ---------------------------------------------------------------------------

TEST_CASE("joint transform: closed-form sides agree") {
    const PhLevyModel m = testutil::model_a();
    for (auto [lam, mu] : std::vector<std::pair<double, double>>{
             {2.0, 1.0}, {1.0, 2.0}, {0.7, 3.1}}) {
        const auto [lhs, rhs] = joint_transform(m, 1.0, lam, mu);
        CHECK(std::abs(lhs - rhs) <= 1e-8);
        CHECK(lhs > 0.0);
        CHECK(lhs <= 1.0 + 1e-12);
    }
    CHECK_THROWS_AS(joint_transform(m, 1.0, 1.3, 1.3), DomainError);
    CHECK_THROWS_AS(joint_transform(testutil::model_b(), 1.0, 2.0, 1.0),
                    DomainError);
}

// ---------------------------------------------------------------------------
// ladder cumulants
// ---------------------------------------------------------------------------

TEST_CASE("ladder cumulant plus: no up jumps reduces to s + Phi(a)") {
    const PhLevyModel m = testutil::bm_model();
    CHECK(ladder_cumulant_plus(m, 2.0, Complex(1.0, 0.0)).real() ==
          doctest::Approx(3.0).epsilon(1e-11));
    CHECK(ladder_cumulant_plus(m, 2.0, Complex(0.0, 0.0)).real() ==
          doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("ladder cumulant plus: rational form on the diffusion model") {
    const PhLevyModel m = testutil::model_a();
    // kappa+(1, s) = (s + rho1)(s + rho2)/(s + 1)
    const double expect = (1.0 + kRho1A) * (1.0 + kRho2A) / 2.0;
    CHECK(ladder_cumulant_plus(m, 1.0, Complex(1.0, 0.0)).real() ==
          doctest::Approx(expect).epsilon(1e-10));

    // unit drift at infinity: the large-s slope is 1
    const double hi = ladder_cumulant_plus(m, 1.0, Complex(1000.0, 0.0)).real();
    const double lo = ladder_cumulant_plus(m, 1.0, Complex(100.0, 0.0)).real();
    CHECK((hi - lo) / 900.0 == doctest::Approx(1.0000070309042792).epsilon(1e-9));
    CHECK(std::abs((hi - lo) / 900.0 - 1.0) <= 1e-3);

    CHECK_THROWS_AS(ladder_cumulant_plus(m, 1.0, Complex(-1.0, 0.0)), PoleError);
}

TEST_CASE("ladder cumulant plus: zero level counts the vanishing root") {
    // mean slope +1, so I+ at a = 0 is {0, 2}: kappa+(0, s) = s(s+2)/(s+1)
    const PhLevyModel m = testutil::model_a();
    CHECK(ladder_cumulant_plus(m, 0.0, Complex(1.0, 0.0)).real() ==
          doctest::Approx(1.5).epsilon(1e-9));
    CHECK(std::abs(ladder_cumulant_plus(m, 0.0, Complex(0.0, 0.0))) <= 1e-9);
}

TEST_CASE("ladder cumulants: exponent factorisation with constant one") {
    for (const PhLevyModel& m : {testutil::model_a(), testutil::model_a_neg()}) {
        for (double a : {0.5, 1.0}) {
            for (double u : {0.5, 1.0, 2.0}) {
                const Complex s(0.0, u);
                const Complex prod = ladder_cumulant_plus(m, a, -s) *
                                     ladder_cumulant_minus(m, a, s);
                const Complex target = a - levy_exponent(m, s);
                CHECK(std::abs(prod - target) <= 1e-9 * (1.0 + std::abs(target)));
            }
        }
    }
}

TEST_CASE("ladder cumulant minus: Brownian closed form") {
    // a = 2: kappa-(2, s) = (2 - s^2/2)/(2 - s) = (2 + s)/2
    const PhLevyModel m = testutil::bm_model();
    CHECK(ladder_cumulant_minus(m, 2.0, Complex(1.0, 0.0)).real() ==
          doctest::Approx(1.5).epsilon(1e-10));
    const Complex atI = ladder_cumulant_minus(m, 2.0, Complex(0.0, 1.0));
    CHECK(atI.real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(atI.imag() == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("ladder cumulant minus: zero-mean boundary vanishes at the origin") {
    // model with mean slope 0 at a = 0: kappa-(0, s) = 2s/(1+s) near 0
    const PhLevyModel m = testutil::model_b();
    CHECK(ladder_cumulant_minus(m, 0.0, Complex(0.01, 0.0)).real() ==
          doctest::Approx(0.02 / 1.01).epsilon(1e-8));
    CHECK(ladder_cumulant_minus(m, 0.0, Complex(-0.01, 0.0)).real() ==
          doctest::Approx(-0.02 / 0.99).epsilon(1e-8));
}

// ---------------------------------------------------------------------------
// ladder height description
// ---------------------------------------------------------------------------

TEST_CASE("ladder height law: general case") {
    const LadderHeightDescription desc =
        ladder_height_law(testutil::model_a());
    CHECK(desc.pathCase == PathClass::General);
    CHECK(desc.drift == doctest::Approx(1.0));
    CHECK(desc.jumpIntensity == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
    CHECK(desc.jumpLaw.atom0 ==
          doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-8));
    REQUIRE(desc.jumpLaw.tail.has_value());
    CHECK(desc.jumpLaw.tail->alpha(0) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
    // recurrent model: the ladder height law is proper
    CHECK(desc.jumpLaw.totalMass() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("ladder height law: subordinator case needs the local-time constant") {
    CHECK_THROWS_AS(ladder_height_law(testutil::model_b()), DomainError);
    const LadderHeightDescription desc =
        ladder_height_law(testutil::model_b(), 0.7);
    CHECK(desc.drift == doctest::Approx(0.0));
    CHECK(desc.jumpIntensity == doctest::Approx(0.7));
    REQUIRE(desc.jumpLaw.tail.has_value());
    CHECK(desc.jumpLaw.tail->alpha(0) == doctest::Approx(1.0).epsilon(1e-8));

    const LadderHeightDescription neg =
        ladder_height_law(testutil::model_b_neg(), 1.0);
    CHECK(neg.jumpLaw.tail->alpha(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

// ---------------------------------------------------------------------------
// wh3 / subordinator cumulant crosscheck
// ---------------------------------------------------------------------------

TEST_CASE("wh3: supremum transform equals the cumulant ratio, general case") {
    const auto [lhs, rhs] = wh3_identity(testutil::model_a(), 1.0, 1.0);
    CHECK(lhs == doctest::Approx(kEtaSumA).epsilon(1e-10));
    CHECK(rhs == doctest::Approx(kEtaSumA).epsilon(1e-10));
    CHECK(std::abs(lhs - rhs) <= 1e-10);
}

TEST_CASE("wh3: subordinator case survives the literal form's sign defect") {
    // the root-product cumulant flips sign for odd m+, but the wh3 ratio
    // cancels it; the closed-form value is sqrt(3) - 1
    const auto [lhs, rhs] = wh3_identity(testutil::model_b(), 1.0, 1.0);
    CHECK(lhs == doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-9));
    CHECK(std::abs(lhs - rhs) <= 1e-8);
}

TEST_CASE("sub cumulant crosscheck: literal and construction routes disagree "
          "by exactly a sign for one phase") {
    const PhLevyModel m = testutil::model_b();
    for (double s : {0.0, 0.7}) {
        const auto [literal, construction] =
            kappa_plus_sub_crosscheck(m, 1.0, s, 1.0);
        CHECK(std::isfinite(literal));
        CHECK(construction > 0.0);
        CHECK(std::abs(literal + construction) <= 1e-10); // (-1)^1 flip
    }
    CHECK(kappa_plus_sub_crosscheck(m, 1.0, 0.0, 1.0).second ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-10));

    // the prefactor (1 - sum eta) kills the literal form at the mean-zero
    // boundary; that is reported as a pole, not patched
    CHECK_THROWS_AS(ladder_cumulant_plus(m, 0.0, Complex(0.5, 0.0), 1.0),
                    PoleError);
    CHECK_THROWS_AS(kappa_plus_sub_crosscheck(testutil::model_a(), 1.0, 0.5, 1.0),
                    DomainError);
}

// ---------------------------------------------------------------------------
// first-passage/overshoot transform over an exponential horizon (frozen case)
// ---------------------------------------------------------------------------

TEST_CASE("wh4 right side: frozen reference values") {
    // rhs = q kappa+(q+a, -b) / (kappa+(q, 0) (q + a - kappa(b)))
    auto rhs = [](const PhLevyModel& m, double q, double a, double b) {
        const Complex num = ladder_cumulant_plus(m, q + a, Complex(-b, 0.0));
        const Complex k0 = ladder_cumulant_plus(m, q, Complex(0.0, 0.0));
        const Complex kb = levy_exponent(m, Complex(b, 0.0));
        return (q * num / (k0 * (q + a - kb))).real();
    };
    CHECK(rhs(testutil::bm_model(), 1.0, 1.0, 1.0) ==
          doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-11));
    CHECK(rhs(testutil::model_a(), 1.0, 0.8, 0.5) ==
          doctest::Approx(0.6638745646756303).epsilon(1e-9));
}
