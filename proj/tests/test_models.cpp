#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "langford/errors.hpp"
#include "langford/models.hpp"
#include "oracles.hpp"

using namespace langford;

namespace {

Polynomial P(const char* text) { return Polynomial::parse(text); }

Params attractor_params() {  // a = d = -3, b = -8, c = 8, e = 6
    return Params{Rational(-3), Rational(-8), Rational(8), Rational(-3), Rational(6)};
}

Signal sin_i(int i) { return Signal::sine(1.0, static_cast<double>(i)); }

}  // namespace

TEST_CASE("base field construction") {
    const PolyVectorField f = build_base(attractor_params());
    CHECK(f.px == P("x*z - 3*x - 8*y"));
    CHECK(f.py == P("y*z + 8*x - 3*y"));
    CHECK(f.pz == P("6*z - x^2 - y^2 - z^2"));

    const PolyVectorField zero_params = build_base(Params{});
    CHECK(zero_params.px == P("x*z"));
    CHECK(zero_params.py == P("y*z"));
    CHECK(zero_params.pz == P("-x^2 - y^2 - z^2"));

    // the chaotic instance of the narrower quadratic system
    const Params belo{Rational(-1, 3), Rational(-1), Rational(1), Rational(-1, 3),
                      Rational(2, 3)};
    const PolyVectorField g = build_base(belo);
    CHECK(g.px == P("x*z - 1/3*x - y"));
    CHECK(g.pz == P("2/3*z - x^2 - y^2 - z^2"));
}

TEST_CASE("eq5 builder and its constraints") {
    const PerturbedSystem sys =
        PerturbedSystem::eq5(attractor_params(), sin_i(1), sin_i(2), sin_i(3));
    CHECK(sys.family() == Family::eq5);
    CHECK(sys.perturbations().size() == 3);
    CHECK(sys.all_signals_odd());

    // all-zero signals: right side coincides with the base field
    const PerturbedSystem quiet =
        PerturbedSystem::eq5(attractor_params(), Signal::zero(), Signal::zero(), Signal::zero());
    oracle::Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const Vec3 p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const double t = rng.uniform(-5, 5);
        CHECK(distance(quiet.rhs(t, p), quiet.base().evaluate(p)) == 0.0);
    }

    Params bad = attractor_params();
    bad.c = Rational(7);  // c != -b
    CHECK_THROWS_WITH_AS(PerturbedSystem::eq5(bad, sin_i(1), sin_i(2), sin_i(3)),
                         doctest::Contains("c = -b"), ConstraintError);
    bad = attractor_params();
    bad.d = Rational(0);
    CHECK_THROWS_WITH_AS(PerturbedSystem::eq5(bad, sin_i(1), sin_i(2), sin_i(3)),
                         doctest::Contains("d = a"), ConstraintError);
}

TEST_CASE("eq6 builder and its constraints") {
    const PerturbedSystem sys =
        PerturbedSystem::eq6(attractor_params(), sin_i(1), sin_i(2), sin_i(3), sin_i(4));
    CHECK(sys.perturbations().size() == 4);
    // base z-component under e = -2a is -(2az + x^2 + y^2 + z^2)
    CHECK(sys.base().pz == P("6*z - x^2 - y^2 - z^2"));

    // alpha_4 = 0 coincides with the eq5 system
    const PerturbedSystem five =
        PerturbedSystem::eq5(attractor_params(), sin_i(1), sin_i(2), sin_i(3));
    const PerturbedSystem six =
        PerturbedSystem::eq6(attractor_params(), sin_i(1), sin_i(2), sin_i(3), Signal::zero());
    oracle::Rng rng(4);
    for (int i = 0; i < 20; ++i) {
        const Vec3 p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const double t = rng.uniform(-5, 5);
        CHECK(distance(five.rhs(t, p), six.rhs(t, p)) == 0.0);
    }

    Params bad = attractor_params();
    bad.e = Rational(5);  // e != -2a
    CHECK_THROWS_WITH_AS(PerturbedSystem::eq6(bad, sin_i(1), sin_i(2), sin_i(3), sin_i(4)),
                         doctest::Contains("e = -2a"), ConstraintError);
}

TEST_CASE("eq7 builder and its constraints") {
    const Params p{Rational(1), Rational(0), Rational(0), Rational(1), Rational(-2)};
    const PerturbedSystem sys =
        PerturbedSystem::eq7(p, sin_i(1), sin_i(2), sin_i(3), sin_i(4), sin_i(5));
    CHECK(sys.perturbations().size() == 5);
    // z equation carries only (1 + alpha_1)
    for (size_t i = 1; i < 5; ++i) CHECK(sys.perturbations()[i].delta.pz.is_zero());

    const PerturbedSystem quiet = PerturbedSystem::eq7(p, Signal::zero(), Signal::zero(),
                                                       Signal::zero(), Signal::zero(),
                                                       Signal::zero());
    CHECK(quiet.base() == build_base(p));

    Params bad = p;
    bad.b = Rational(1);
    CHECK_THROWS_WITH_AS(
        PerturbedSystem::eq7(bad, sin_i(1), sin_i(2), sin_i(3), sin_i(4), sin_i(5)),
        doctest::Contains("b = 0"), ConstraintError);
}

TEST_CASE("builders admit only reflecting-function-preserving terms") {
    // construction re-checks the identity for random constraint-
    // satisfying parameters; reaching here without a throw is the test
    oracle::Rng rng(55);
    for (int i = 0; i < 5; ++i) {
        const Params p2 = oracle::params_class2(rng);
        PerturbedSystem::eq5(p2, oracle::odd_signal(rng), oracle::odd_signal(rng),
                             oracle::odd_signal(rng));
        const Params p3 = oracle::params_class3(rng);
        PerturbedSystem::eq6(p3, oracle::odd_signal(rng), oracle::odd_signal(rng),
                             oracle::odd_signal(rng), oracle::odd_signal(rng));
        const Params p4 = oracle::params_class4(rng);
        PerturbedSystem::eq7(p4, oracle::odd_signal(rng), oracle::odd_signal(rng),
                             oracle::odd_signal(rng), oracle::odd_signal(rng),
                             oracle::odd_signal(rng));
    }
}

TEST_CASE("signal oddness, numerically and structurally") {
    oracle::Rng rng(66);
    for (int trial = 0; trial < 10; ++trial) {
        const Signal s = oracle::odd_signal(rng, 3);
        CHECK(s.is_odd());
        for (int i = 0; i < 100; ++i) {
            const double t = rng.uniform(0, 20);
            CHECK(std::fabs(s.eval(-t) + s.eval(t)) <= 1e-14);
        }
    }
    CHECK(!Signal::cosine(0.5, 1.0).is_odd());
    CHECK(!Signal::constant(0.1).is_odd());
    CHECK(Signal::cosine(0.5, 1.0).plus(Signal::cosine(-0.5, 1.0)).is_odd());
}

TEST_CASE("signal antiderivative matches quadrature") {
    oracle::Rng rng(67);
    for (int trial = 0; trial < 10; ++trial) {
        const Signal s = oracle::any_signal(rng);
        const double t = rng.uniform(-8, 8);
        const double exact = s.antiderivative(t);
        const double quad = oracle::integrate([&](double u) { return s.eval(u); }, 0, t);
        CHECK(exact == doctest::Approx(quad).epsilon(1e-10));
    }
}

TEST_CASE("rhs at t = 0 with odd signals equals the base field") {
    const PerturbedSystem sys =
        PerturbedSystem::eq6(attractor_params(), sin_i(1), sin_i(2), sin_i(3), sin_i(4));
    const Vec3 p{0.01, 0.02, 3.0};
    CHECK(distance(sys.rhs(0.0, p), sys.base().evaluate(p)) == 0.0);
}

TEST_CASE("the base field vanishes at G = (0, 0, -2a)") {
    oracle::Rng rng(68);
    for (int i = 0; i < 10; ++i) {
        const Params p = oracle::params_class3(rng);
        const PerturbedSystem sys = PerturbedSystem::base_system(p);
        const Vec3 g{0, 0, -2 * p.a.to_double()};
        CHECK(sys.rhs(0.0, g).norm() <= 1e-12);
    }
}

TEST_CASE("the origin is a fixed point of every family") {
    oracle::Rng rng(72);
    const PerturbedSystem e5 = PerturbedSystem::eq5(oracle::params_class2(rng),
                                                    oracle::odd_signal(rng),
                                                    oracle::odd_signal(rng),
                                                    oracle::odd_signal(rng));
    const PerturbedSystem e7 = PerturbedSystem::eq7(oracle::params_class4(rng),
                                                    oracle::odd_signal(rng),
                                                    oracle::odd_signal(rng),
                                                    oracle::odd_signal(rng),
                                                    oracle::odd_signal(rng),
                                                    oracle::odd_signal(rng));
    for (double t : {0.0, 0.3, 2.7}) {
        CHECK(e5.rhs(t, {0, 0, 0}).norm() == 0.0);
        CHECK(e7.rhs(t, {0, 0, 0}).norm() == 0.0);
    }
}

TEST_CASE("rhs_with_alphas supports caller-evaluated signals") {
    const PerturbedSystem sys =
        PerturbedSystem::eq5(attractor_params(), sin_i(1), sin_i(2), sin_i(3));
    const Vec3 p{0.3, -0.2, 1.0};
    const double t = 0.7;
    const std::vector<double> alphas{std::sin(t), std::sin(2 * t), std::sin(3 * t)};
    CHECK(distance(sys.rhs(t, p), sys.rhs_with_alphas(alphas, p)) <= 1e-15);
    CHECK_THROWS(sys.rhs_with_alphas({0.0}, p));
}

TEST_CASE("divergence of the base field is a + d + e (central differences)") {
    oracle::Rng rng(69);
    for (int trial = 0; trial < 10; ++trial) {
        const Params prm = oracle::params_generic(rng);
        const PerturbedSystem sys = PerturbedSystem::base_system(prm);
        const double expected = (prm.a + prm.d + prm.e).to_double();
        const double h = 1e-5;
        const Vec3 p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        double div = 0;
        for (int axis = 0; axis < 3; ++axis) {
            Vec3 lo = p, hi = p;
            lo[axis] -= h;
            hi[axis] += h;
            div += (sys.rhs(0, hi)[axis] - sys.rhs(0, lo)[axis]) / (2 * h);
        }
        CHECK(div == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("symbolic jacobian agrees with finite differences") {
    oracle::Rng rng(70);
    const Params prm = oracle::params_class3(rng);
    const PerturbedSystem sys = PerturbedSystem::eq6(prm, oracle::odd_signal(rng),
                                                     oracle::odd_signal(rng),
                                                     oracle::odd_signal(rng),
                                                     oracle::odd_signal(rng));
    for (int trial = 0; trial < 5; ++trial) {
        const Vec3 p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double t = rng.uniform(-3, 3);
        const Mat3 j = sys.jacobian(t, p);
        const double h = 1e-6;
        for (int c = 0; c < 3; ++c) {
            Vec3 lo = p, hi = p;
            lo[c] -= h;
            hi[c] += h;
            const Vec3 dcol = (sys.rhs(t, hi) - sys.rhs(t, lo)) * (1.0 / (2 * h));
            for (int r = 0; r < 3; ++r)
                CHECK(j.at(r, c) == doctest::Approx(dcol[r]).epsilon(5e-5));
        }
    }
}

TEST_CASE("equilibrium eigenvalues at O and G") {
    // a = -3, b = -8 (e = 6 = -2a)
    const auto [o, g] = equilibrium_eigenvalues(attractor_params());
    CHECK(o.location.norm() == 0.0);
    CHECK(g.location.z == doctest::Approx(6.0));

    auto has = [](const Equilibrium& e, std::complex<double> w) {
        for (const auto& ev : e.eigenvalues)
            if (std::abs(ev - w) < 1e-9) return true;
        return false;
    };
    CHECK(has(o, {6, 0}));
    CHECK(has(o, {-3, 8}));
    CHECK(has(o, {-3, -8}));
    CHECK(has(g, {-6, 0}));
    CHECK(has(g, {3, 8}));
    CHECK(has(g, {3, -8}));

    // a = 0, b = 1: O eigenvalues (0, +-i)
    const Params degenerate{Rational(0), Rational(1), Rational(-1), Rational(0), Rational(0)};
    const auto [o2, g2] = equilibrium_eigenvalues(degenerate);
    CHECK(has(o2, {0, 1}));
    CHECK(has(o2, {0, -1}));
    CHECK(g2.location.norm() == 0.0);

    // lambda_1^O * lambda_1^G = -4a^2 < 0 for a != 0
    oracle::Rng rng(71);
    for (int i = 0; i < 5; ++i) {
        const Params p = oracle::params_class3(rng);
        const auto [eo, eg] = equilibrium_eigenvalues(p);
        double lo = eo.eigenvalues[0].real(), lg = eg.eigenvalues[0].real();
        // the real simple eigenvalues are -2a at O, 2a at G
        for (const auto& ev : eo.eigenvalues)
            if (std::fabs(ev.imag()) < 1e-12) lo = ev.real();
        for (const auto& ev : eg.eigenvalues)
            if (std::fabs(ev.imag()) < 1e-12) lg = ev.real();
        const double a = p.a.to_double();
        CHECK(lo * lg == doctest::Approx(-4 * a * a).epsilon(1e-9));
        CHECK(lo * lg < 0);
    }

    Params bad = attractor_params();
    bad.e = Rational(1);
    CHECK_THROWS_AS(equilibrium_eigenvalues(bad), ConstraintError);
}
