#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "langford/analysis.hpp"
#include "langford/errors.hpp"
#include "oracles.hpp"

using namespace langford;

namespace {

Params cycle_params() {  // a(a+e) = -2 < 0
    return Params{Rational(-1), Rational(1), Rational(-1), Rational(-1), Rational(3)};
}

Signal sin_i(int i) { return Signal::sine(1.0, static_cast<double>(i)); }

const double kTwoPi = 6.28318530717958647692;

}  // namespace

TEST_CASE("closed-form points") {
    const ClosedFormOrbit base = ClosedFormOrbit::base_cycle(cycle_params());
    const Vec3 p0 = base.point(0);
    CHECK(p0.x == doctest::Approx(0.0));
    CHECK(p0.y == doctest::Approx(std::sqrt(2.0)));
    CHECK(p0.z == doctest::Approx(1.0));
    CHECK(base.radius() == doctest::Approx(std::sqrt(2.0)));

    // zero phase signals reduce the perturbed cycle to the base one
    const ClosedFormOrbit quiet =
        ClosedFormOrbit::eq5_cycle(cycle_params(), Signal::zero(), Signal::zero());
    for (double t : {0.0, 0.7, 2.9, -4.2})
        CHECK(distance(quiet.point(t), base.point(t)) == 0.0);

    // a = 2, e = -4, b = 1, quiet signals, t = pi/2
    const Params p6{Rational(2), Rational(1), Rational(-1), Rational(2), Rational(-4)};
    const ClosedFormOrbit ten =
        ClosedFormOrbit::eq6_cycle(p6, Signal::zero(), Signal::zero(), Signal::zero());
    const Vec3 q = ten.point(M_PI / 2);
    CHECK(q.x == doctest::Approx(2.0));
    CHECK(q.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q.z == doctest::Approx(-2.0));

    Params bad = cycle_params();
    bad.e = Rational(1);  // a(a+e) = 0
    CHECK_THROWS_AS(ClosedFormOrbit::base_cycle(bad), ConstraintError);
}

TEST_CASE("orbit residual: base cycle") {
    const PerturbedSystem sys = PerturbedSystem::base_system(cycle_params());
    const ClosedFormOrbit orbit = ClosedFormOrbit::for_system(sys);
    CHECK(orbit_residual(sys, orbit, 100, 0, 10) <= 1e-12);
    CHECK(orbit_residual(sys, orbit.with_z_offset(0.1), 100, 0, 10) > 0.01);
}

TEST_CASE("orbit residual: eq5 cycle with sin(i t) signals") {
    const PerturbedSystem sys =
        PerturbedSystem::eq5(cycle_params(), sin_i(1), sin_i(2), sin_i(3));
    const ClosedFormOrbit orbit = ClosedFormOrbit::for_system(sys);
    CHECK(orbit_residual(sys, orbit, 100, 0, 10) <= 1e-10);
}

TEST_CASE("orbit residual across the random draw matrix") {
    oracle::Rng rng(2001);
    for (int i = 0; i < 10; ++i) {
        const Params p = oracle::params_cycle(rng, i % 2 == 0);
        const PerturbedSystem base = PerturbedSystem::base_system(p);
        CHECK(orbit_residual(base, ClosedFormOrbit::for_system(base), 100, 0, 10) <= 1e-10);

        const PerturbedSystem e5 = PerturbedSystem::eq5(p, oracle::odd_signal(rng),
                                                        oracle::odd_signal(rng),
                                                        oracle::odd_signal(rng));
        CHECK(orbit_residual(e5, ClosedFormOrbit::for_system(e5), 100, 0, 10) <= 1e-10);
    }
    for (int i = 0; i < 10; ++i) {
        Params p;
        p.a = oracle::small_rational(rng);
        p.b = oracle::small_rational(rng);
        p.c = -p.b;
        p.d = p.a;
        p.e = -(p.a * Rational(2));
        const PerturbedSystem e6 =
            PerturbedSystem::eq6(p, oracle::odd_signal(rng), oracle::odd_signal(rng),
                                 oracle::odd_signal(rng), oracle::odd_signal(rng));
        CHECK(orbit_residual(e6, ClosedFormOrbit::for_system(e6), 100, 0, 10) <= 1e-10);
    }
}

TEST_CASE("integral condition: worked values") {
    // b = -8, alpha_1 = sin(8t), alpha_3 = 0: I = 0, k = 0, satisfied
    Params p{Rational(-3), Rational(-8), Rational(8), Rational(-3), Rational(6)};
    {
        const std::vector<Signal> sig{Signal::sine(1, 8), Signal::zero(), Signal::zero()};
        const auto r = check_integral_condition(PeriodicityTheorem::T4i, p, sig);
        CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.k == 0);
        CHECK(r.satisfied);
        CHECK(r.upper_limit == doctest::Approx(-kTwoPi / 8));
    }
    {
        // alpha_1 = 0, alpha_3 = sin t: I = 1 - sqrt(2)/2, not satisfied
        const std::vector<Signal> sig{Signal::zero(), Signal::zero(), Signal::sine(1, 1)};
        const auto r = check_integral_condition(PeriodicityTheorem::T4i, p, sig);
        CHECK(r.value == doctest::Approx(1.0 - std::sqrt(2.0) / 2).epsilon(1e-12));
        CHECK(r.k == 0);
        CHECK(!r.satisfied);
    }
    {
        // T6i with omega = 2 pi, alpha_3 = sin t: satisfied, odd combo
        Params p0 = p;
        p0.b = Rational(0);
        const std::vector<Signal> sig{Signal::zero(), Signal::zero(), Signal::sine(1, 1)};
        const auto r = check_integral_condition(PeriodicityTheorem::T6i, p0, sig, kTwoPi);
        CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.satisfied);
        CHECK(r.odd_by_construction);
        CHECK(r.combo_periodic);
    }
}

TEST_CASE("integral condition preconditions") {
    Params p = cycle_params();
    const std::vector<Signal> sig{sin_i(1), sin_i(2), sin_i(3)};
    Params b0 = p;
    b0.b = Rational(0);
    CHECK_THROWS_AS(check_integral_condition(PeriodicityTheorem::T4i, b0, sig), ConstraintError);
    CHECK_THROWS_AS(check_integral_condition(PeriodicityTheorem::T6i, p, sig, kTwoPi),
                    ConstraintError);
    CHECK_THROWS_AS(check_integral_condition(PeriodicityTheorem::T6i, b0, sig, 0.0),
                    ConstraintError);
    CHECK_THROWS_AS(check_integral_condition(PeriodicityTheorem::T4ii, p, sig), ConstraintError);
}

TEST_CASE("integral condition agrees with adaptive quadrature") {
    oracle::Rng rng(3003);
    for (int i = 0; i < 20; ++i) {
        Params p;
        p.a = oracle::small_rational(rng);
        p.b = oracle::small_rational(rng);
        p.c = -p.b;
        p.d = p.a;
        p.e = oracle::small_rational(rng);
        const std::vector<Signal> sig{oracle::any_signal(rng), Signal::zero(),
                                      oracle::any_signal(rng), oracle::any_signal(rng)};
        const bool variant_ii = i % 2 == 1;
        const auto thm = variant_ii ? PeriodicityTheorem::T4ii : PeriodicityTheorem::T4i;
        const auto r = check_integral_condition(thm, p, sig);

        const double b = p.b.to_double();
        const double a4 = std::pow(p.a.to_double(), 4);
        auto combo = [&](double t) {
            double v = b * sig[0].eval(t) + sig[2].eval(t);
            if (variant_ii) v += a4 * sig[3].eval(t);
            return v;
        };
        const double quad = oracle::integrate(combo, 0.0, r.upper_limit, 1e-13);
        CHECK(std::fabs(r.value - quad) <= 1e-9);
    }
}

TEST_CASE("T5 demands a zero integral, not just a 2-pi-k one") {
    // combo with integral exactly 2 pi over the signed period: alpha_3
    // constant = b (so integral over 2 pi / b is 2 pi) -> T5 unsatisfied
    Params p = cycle_params();  // b = 1
    const std::vector<Signal> sig{Signal::zero(), Signal::zero(), Signal::constant(1.0)};
    const auto r = check_integral_condition(PeriodicityTheorem::T5i, p, sig);
    CHECK(r.k == 1);
    CHECK(r.residual <= 1e-9);
    CHECK(!r.satisfied);  // target is 0 for T5
    CHECK(!r.odd_by_construction);

    const auto r4 = check_integral_condition(PeriodicityTheorem::T4i, p, sig);
    CHECK(r4.satisfied);  // T4 accepts any 2 pi k
}

TEST_CASE("floquet dichotomy on the base cycle") {
    IntegratorConfig cfg;
    {
        const Params p{Rational(-1), Rational(1), Rational(-1), Rational(-1), Rational(3, 2)};
        const PerturbedSystem sys = PerturbedSystem::base_system(p);
        const auto rep = floquet(sys, ClosedFormOrbit::for_system(sys), kTwoPi, cfg);
        CHECK(rep.classification == OrbitStability::asymptotically_stable);
        CHECK(std::abs(rep.multipliers[static_cast<size_t>(rep.trivial_index)] - 1.0) <= 1e-5);
    }
    {
        const Params p = cycle_params();  // 2a + e = 1 > 0
        const PerturbedSystem sys = PerturbedSystem::base_system(p);
        const auto rep = floquet(sys, ClosedFormOrbit::for_system(sys), kTwoPi, cfg);
        CHECK(rep.classification == OrbitStability::unstable);
        CHECK(std::abs(rep.multipliers[static_cast<size_t>(rep.trivial_index)] - 1.0) <= 1e-5);

        // multiplier product equals the monodromy determinant
        std::complex<double> prod = 1;
        for (const auto& m : rep.multipliers) prod *= m;
        CHECK(std::abs(prod - rep.monodromy.det()) <= 1e-8 * std::abs(prod));
    }
}

TEST_CASE("floquet classification matches the sign of 2a+e on random draws") {
    oracle::Rng rng(4004);
    IntegratorConfig cfg;
    int stable_seen = 0, unstable_seen = 0;
    for (int i = 0; i < 10; ++i) {
        const bool want_stable = i % 2 == 0;
        const Params p = oracle::params_cycle(rng, want_stable);
        const PerturbedSystem sys = PerturbedSystem::base_system(p);
        const double period = kTwoPi / std::fabs(p.b.to_double());
        const auto rep = floquet(sys, ClosedFormOrbit::for_system(sys), period, cfg);
        const double two_a_e = (p.a * Rational(2) + p.e).to_double();
        if (two_a_e < 0) {
            CHECK(rep.classification == OrbitStability::asymptotically_stable);
            ++stable_seen;
        } else {
            CHECK(rep.classification == OrbitStability::unstable);
            ++unstable_seen;
        }
        CHECK(std::abs(rep.multipliers[static_cast<size_t>(rep.trivial_index)] - 1.0) <= 1e-4);
    }
    CHECK(stable_seen >= 4);
    CHECK(unstable_seen >= 4);
}

TEST_CASE("floquet transfers to the periodic eq5 cycle") {
    // alpha_1 = alpha_3 = sin(|b| t) keeps the right side 2pi/|b|-periodic
    // and zeroes the phase integral over the period
    const Params p{Rational(-1), Rational(2), Rational(-2), Rational(-1), Rational(3, 2)};
    const PerturbedSystem sys =
        PerturbedSystem::eq5(p, Signal::sine(0.5, 2), Signal::sine(0.3, 2), Signal::sine(1, 2));
    const auto r = check_integral_condition(PeriodicityTheorem::T4i, p,
                                            {sys.signal(0), sys.signal(1), sys.signal(2)});
    CHECK(r.satisfied);
    const auto rep = floquet(sys, ClosedFormOrbit::for_system(sys), kTwoPi / 2, IntegratorConfig{});
    CHECK(rep.classification == OrbitStability::asymptotically_stable);  // 2a + e = -1/2
}

TEST_CASE("shift operator equality across systems sharing a reflecting function") {
    const Params p = cycle_params();
    const PerturbedSystem base = PerturbedSystem::base_system(p);
    const PerturbedSystem e5 = PerturbedSystem::eq5(p, sin_i(1), sin_i(2), sin_i(3));

    IntegratorConfig cfg;
    const std::vector<Vec3> pts{{0.1, 0.2, 0.3}};
    CHECK(shift_operator_compare(base, e5, 1.0, pts, cfg) <= 1e-6);

    // identical systems agree to integrator noise
    const PerturbedSystem quiet =
        PerturbedSystem::eq5(p, Signal::zero(), Signal::zero(), Signal::zero());
    CHECK(shift_operator_compare(base, quiet, 1.0, pts, cfg) <= 1e-10);

    CHECK(shift_operator_compare(base, e5, 0.0, pts, cfg) == 0.0);
}

TEST_CASE("shift-operator distance scales down with integrator tolerance") {
    const Params p{Rational(1, 2), Rational(1), Rational(-1), Rational(1, 2), Rational(-1)};
    const PerturbedSystem base = PerturbedSystem::base_system(p);
    const PerturbedSystem e5 = PerturbedSystem::eq5(p, sin_i(1), sin_i(2), sin_i(3));
    const std::vector<Vec3> pts{{0.1, 0.2, 0.3}, {-0.2, 0.1, -0.1}, {0.3, -0.3, 0.2}};

    double prev = -1;
    for (double rtol : {1e-6, 5e-7, 2.5e-7, 1.25e-7}) {
        IntegratorConfig cfg;
        cfg.rtol = rtol;
        cfg.atol = rtol * 1e-3;
        const double d = shift_operator_compare(base, e5, 1.5, pts, cfg);
        if (prev >= 0) CHECK(d <= 2 * prev + 1e-14);
        prev = d;
    }
}

TEST_CASE("shift operator comparison refuses bad inputs") {
    const Params p = cycle_params();
    const PerturbedSystem base = PerturbedSystem::base_system(p);
    const PerturbedSystem non_odd =
        PerturbedSystem::eq5(p, Signal::cosine(0.3, 1), Signal::zero(), Signal::zero());
    const std::vector<Vec3> pts{{0.1, 0.1, 0.1}};
    CHECK_THROWS_AS(shift_operator_compare(base, non_odd, 1.0, pts, IntegratorConfig{}),
                    ConstraintError);

    Params other = cycle_params();
    other.e = Rational(2);
    const PerturbedSystem different_base = PerturbedSystem::base_system(other);
    CHECK_THROWS_AS(shift_operator_compare(base, different_base, 1.0, pts, IntegratorConfig{}),
                    ConstraintError);
}

TEST_CASE("instability probe, eq5 with e = 0") {
    const Params p{Rational(-1), Rational(1), Rational(-1), Rational(-1), Rational(0)};
    const PerturbedSystem sys = PerturbedSystem::eq5(p, Signal::sine(0.4, 1),
                                                     Signal::cosine(0.4, 1), Signal::zero());
    const auto rep = instability_probe(sys, 1e-3, 0.1, 10, 42, IntegratorConfig{});
    CHECK(rep.symbolic_ok);
    CHECK(rep.vdot_factor == "3*x^2*z^2 + 3*y^2*z^2 + 3*z^4");
    CHECK(rep.alpha_sum_min == doctest::Approx(-0.4 * std::sqrt(2.0)).epsilon(1e-6));
    CHECK(rep.hypothesis_ok);
    CHECK(rep.all_escaped);
    for (const auto& e : rep.escapes) {
        CHECK(e.escaped);
        CHECK(e.t_exit < 1e4);
        CHECK(e.start.z < 0);
        CHECK(e.start.norm() == doctest::Approx(1e-3));
    }
}

TEST_CASE("instability probe, quiet signals") {
    const Params p{Rational(-1), Rational(1), Rational(-1), Rational(-1), Rational(0)};
    const PerturbedSystem sys =
        PerturbedSystem::eq5(p, Signal::zero(), Signal::zero(), Signal::zero());
    const auto rep = instability_probe(sys, 1e-3, 0.1, 5, 7, IntegratorConfig{});
    CHECK(rep.symbolic_ok);  // dV/dt = 3z^2(x^2+y^2+z^2), positive off the origin
    CHECK(rep.alpha_sum_min == 0.0);
    CHECK(rep.all_escaped);
}

TEST_CASE("instability probe, eq6 and eq7 with a = 0") {
    const Params p6{Rational(0), Rational(1), Rational(-1), Rational(0), Rational(0)};
    const PerturbedSystem s6 = PerturbedSystem::eq6(p6, Signal::sine(0.4, 1),
                                                    Signal::cosine(0.4, 1), Signal::zero(),
                                                    Signal::sine(0.2, 2));
    const auto r6 = instability_probe(s6, 1e-3, 0.1, 10, 43, IntegratorConfig{});
    CHECK(r6.symbolic_ok);
    CHECK(r6.all_escaped);

    const Params p7{Rational(0), Rational(0), Rational(0), Rational(0), Rational(0)};
    const PerturbedSystem s7 =
        PerturbedSystem::eq7(p7, Signal::sine(0.4, 1), Signal::sine(1, 1), Signal::sine(0.1, 2),
                             Signal::zero(), Signal::sine(0.2, 3));
    const auto r7 = instability_probe(s7, 1e-3, 0.1, 10, 44, IntegratorConfig{});
    CHECK(r7.symbolic_ok);
    CHECK(r7.all_escaped);
}

TEST_CASE("instability probe rejects hypothesis violations") {
    const PerturbedSystem sys =
        PerturbedSystem::eq5(cycle_params(), sin_i(1), sin_i(2), sin_i(3));  // e = 3 != 0
    CHECK_THROWS_AS(instability_probe(sys, 1e-3, 0.1, 5, 1, IntegratorConfig{}),
                    ConstraintError);
    const PerturbedSystem base = PerturbedSystem::base_system(cycle_params());
    CHECK_THROWS_AS(instability_probe(base, 1e-3, 0.1, 5, 1, IntegratorConfig{}),
                    ConstraintError);
}

TEST_CASE("lyapunov spectrum of the zero field is zero") {
    const PerturbedSystem sys = PerturbedSystem::custom(PolyVectorField{});
    const auto spec = lyapunov_spectrum(sys, {1, 2, 3}, 1.0, 10.0, 0.5, IntegratorConfig{});
    for (double l : spec.exponents) CHECK(std::fabs(l) <= 1e-12);
}

TEST_CASE("lyapunov spectrum reproduces Lorenz-63") {
    // independent cross-validation of the tangent + QR machinery on a
    // system with a well-known spectrum (0.906, 0, -14.57)
    PolyVectorField f;
    f.px = Polynomial::parse("10*y - 10*x");
    f.py = Polynomial::parse("28*x - y - x*z");
    f.pz = Polynomial::parse("x*y - 8/3*z");
    const PerturbedSystem lorenz = PerturbedSystem::custom(f);
    const auto spec = lyapunov_spectrum(lorenz, {1, 1, 1}, 20, 520, 0.05, IntegratorConfig{});
    CHECK(spec.exponents[0] == doctest::Approx(0.906).epsilon(0.05));
    CHECK(std::fabs(spec.exponents[1]) <= 0.02);
    CHECK(spec.exponents[2] == doctest::Approx(-14.57).epsilon(0.02));
    CHECK(spec.sum() == doctest::Approx(-10.0 - 1.0 - 8.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("lyapunov spectrum near a stable cycle") {
    const Params p{Rational(-1), Rational(1), Rational(-1), Rational(-1), Rational(3, 2)};
    const PerturbedSystem sys = PerturbedSystem::base_system(p);
    // start near (not on) the cycle x^2+y^2 = 1/2, z = 1
    const Vec3 x0{0.05, std::sqrt(0.5) + 0.02, 0.97};
    const auto spec = lyapunov_spectrum(sys, x0, 50, 600, 0.25, IntegratorConfig{});
    CHECK(spec.exponents[0] >= -0.01);
    CHECK(spec.exponents[0] <= 0.01);
    // sum of exponents tracks the constant divergence a + d + e = -1/2
    CHECK(std::fabs(spec.sum() - (-0.5)) <= 0.01);
}
