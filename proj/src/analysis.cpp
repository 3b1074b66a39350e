#include "langford/analysis.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "langford/errors.hpp"
#include "langford/rng.hpp"

namespace langford {

namespace {

const double kTwoPi = 6.28318530717958647692;

double rational_pow4(const Rational& r) {
    return (r * r * r * r).to_double();
}

}  // namespace

ClosedFormOrbit ClosedFormOrbit::base_cycle(const Params& p) {
    const Rational prod = p.a * (p.a + p.e);
    if (!(prod < Rational(0)))
        throw ConstraintError("base cycle: constraint a(a+e) < 0 violated (a=" + p.a.str() +
                              ", e=" + p.e.str() + ")");
    ClosedFormOrbit o;
    o.family_ = Family::base;
    o.amp_ = std::sqrt(-prod.to_double());
    o.b_ = p.b.to_double();
    o.z_ = -p.a.to_double();
    return o;
}

ClosedFormOrbit ClosedFormOrbit::eq5_cycle(const Params& p, const Signal& a1, const Signal& a3) {
    ClosedFormOrbit o = base_cycle(p);
    o.family_ = Family::eq5;
    o.phase_rate_ = a1.scaled(p.b.to_double()).plus(a3);
    return o;
}

ClosedFormOrbit ClosedFormOrbit::eq6_cycle(const Params& p, const Signal& a1, const Signal& a3,
                                           const Signal& a4) {
    if (p.e != -(p.a * Rational(2)))
        throw ConstraintError("eq6 cycle: constraint e = -2a violated (e=" + p.e.str() +
                              ", a=" + p.a.str() + ")");
    if (p.a.is_zero())
        throw ConstraintError("eq6 cycle: a = 0 degenerates the cycle to a point");
    ClosedFormOrbit o;
    o.family_ = Family::eq6;
    o.amp_ = p.a.to_double();  // signed amplitude, cycle radius |a|
    o.b_ = p.b.to_double();
    o.z_ = -p.a.to_double();
    o.phase_rate_ = a1.scaled(p.b.to_double()).plus(a3).plus(a4.scaled(rational_pow4(p.a)));
    return o;
}

ClosedFormOrbit ClosedFormOrbit::for_system(const PerturbedSystem& sys) {
    const auto& terms = sys.perturbations();
    switch (sys.family()) {
        case Family::base:
            return base_cycle(sys.params());
        case Family::eq5:
            return eq5_cycle(sys.params(), terms[0].signal, terms[2].signal);
        case Family::eq6:
            return eq6_cycle(sys.params(), terms[0].signal, terms[2].signal, terms[3].signal);
        case Family::eq7:
            break;
    }
    throw ConstraintError("no closed-form cycle is available for this family");
}

Vec3 ClosedFormOrbit::point(double t) const {
    const double theta = b_ * t + phase_rate_.antiderivative(t);
    return {amp_ * std::sin(theta), amp_ * std::cos(theta), z_};
}

Vec3 ClosedFormOrbit::velocity(double t) const {
    const double theta = b_ * t + phase_rate_.antiderivative(t);
    const double rate = b_ + phase_rate_.eval(t);
    return {amp_ * std::cos(theta) * rate, -amp_ * std::sin(theta) * rate, 0.0};
}

ClosedFormOrbit ClosedFormOrbit::with_z_offset(double dz) const {
    ClosedFormOrbit o = *this;
    o.z_ += dz;
    return o;
}

double orbit_residual(const PerturbedSystem& sys, const ClosedFormOrbit& orbit, int samples,
                      double t0, double t1) {
    if (sys.family() != orbit.family())
        throw ConstraintError("orbit family does not match system family");
    if (samples < 1) throw std::invalid_argument("orbit_residual requires samples >= 1");
    double worst = 0;
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? t0 : t0 + (t1 - t0) * static_cast<double>(i) / (samples - 1);
        const Vec3 lhs = orbit.velocity(t);
        const Vec3 rhs = sys.rhs(t, orbit.point(t));
        worst = std::max(worst, distance(lhs, rhs));
    }
    return worst;
}

double return_map_gap(const PerturbedSystem& sys, const Vec3& x0, double t0, double period,
                      const IntegratorConfig& cfg) {
    return distance(flow(sys, x0, t0, t0 + period, cfg), x0);
}

std::string theorem_name(PeriodicityTheorem t) {
    switch (t) {
        case PeriodicityTheorem::T4i: return "T4i";
        case PeriodicityTheorem::T4ii: return "T4ii";
        case PeriodicityTheorem::T5i: return "T5i";
        case PeriodicityTheorem::T5ii: return "T5ii";
        case PeriodicityTheorem::T6i: return "T6i";
        case PeriodicityTheorem::T6ii: return "T6ii";
    }
    return "T4i";
}

PeriodicityTheorem theorem_from_name(const std::string& name) {
    if (name == "T4i") return PeriodicityTheorem::T4i;
    if (name == "T4ii") return PeriodicityTheorem::T4ii;
    if (name == "T5i") return PeriodicityTheorem::T5i;
    if (name == "T5ii") return PeriodicityTheorem::T5ii;
    if (name == "T6i") return PeriodicityTheorem::T6i;
    if (name == "T6ii") return PeriodicityTheorem::T6ii;
    throw ParseError("unknown periodicity theorem '" + name + "'");
}

IntegralConditionReport check_integral_condition(PeriodicityTheorem thm, const Params& p,
                                                 const std::vector<Signal>& signals,
                                                 double omega, double tol) {
    const bool variant_ii = thm == PeriodicityTheorem::T4ii || thm == PeriodicityTheorem::T5ii ||
                            thm == PeriodicityTheorem::T6ii;
    const bool is_t4 = thm == PeriodicityTheorem::T4i || thm == PeriodicityTheorem::T4ii;
    const bool is_t5 = thm == PeriodicityTheorem::T5i || thm == PeriodicityTheorem::T5ii;
    const bool is_t6 = thm == PeriodicityTheorem::T6i || thm == PeriodicityTheorem::T6ii;

    if (signals.size() < (variant_ii ? 4u : 3u))
        throw ConstraintError(theorem_name(thm) + " needs alpha_1..alpha_" +
                              (variant_ii ? std::string("4") : std::string("3")));
    if ((is_t4 || is_t5) && p.b.is_zero())
        throw ConstraintError(theorem_name(thm) + ": constraint b != 0 violated");
    if (is_t6 && !p.b.is_zero())
        throw ConstraintError(theorem_name(thm) + ": constraint b = 0 violated (b=" +
                              p.b.str() + ")");
    if (is_t6 && !(omega > 0))
        throw ConstraintError(theorem_name(thm) + ": requires a period omega > 0");

    const double b = p.b.to_double();
    Signal combo = signals[0].scaled(b).plus(signals[2]);
    if (variant_ii) combo = combo.plus(signals[3].scaled(rational_pow4(p.a)));

    IntegralConditionReport r;
    r.theorem = thm;
    if (is_t4)
        r.upper_limit = -kTwoPi / std::fabs(b);
    else if (is_t5)
        r.upper_limit = kTwoPi / b;
    else
        r.upper_limit = omega;

    r.value = combo.antiderivative(r.upper_limit);
    r.k = static_cast<long>(std::nearbyint(r.value / kTwoPi));  // round half to even
    r.residual = std::fabs(r.value - kTwoPi * static_cast<double>(r.k));
    r.satisfied = is_t5 ? std::fabs(r.value) <= tol : r.residual <= tol;
    r.odd_by_construction = combo.is_odd();
    r.combo_periodic = combo.is_periodic(is_t6 ? omega : kTwoPi / std::fabs(b));
    return r;
}

std::string stability_name(OrbitStability s) {
    switch (s) {
        case OrbitStability::asymptotically_stable: return "asymptotically stable";
        case OrbitStability::unstable: return "unstable";
        case OrbitStability::marginal: return "marginal";
    }
    return "marginal";
}

FloquetReport floquet(const PerturbedSystem& sys, const ClosedFormOrbit& orbit, double period,
                      const IntegratorConfig& cfg) {
    if (!(period > 0)) throw std::invalid_argument("floquet requires period > 0");

    // The cycle must actually solve the system before a monodromy
    // matrix means anything.
    const double res = orbit_residual(sys, orbit, 64, 0.0, period);
    if (res > 1e-8)
        throw ConstraintError("floquet: closed form does not satisfy the system (residual " +
                              std::to_string(res) + ")");
    IntegratorConfig tight = cfg;
    tight.rtol = std::min(cfg.rtol, 1e-11);
    tight.atol = std::min(cfg.atol, 1e-13);
    const double gap = return_map_gap(sys, orbit.point(0.0), 0.0, period, tight);
    if (gap > 1e-7)
        throw ConstraintError("floquet: orbit is not closed over the given period (gap " +
                              std::to_string(gap) + ")");

    const Trajectory tr = integrate_with_tangent(sys, orbit.point(0.0), 0.0, period, cfg);
    FloquetReport rep;
    rep.monodromy = tr.tangent.back();

    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = rep.monodromy.at(r, c);
    Eigen::EigenSolver<Eigen::Matrix3d> solver(m);
    for (int i = 0; i < 3; ++i) rep.multipliers[static_cast<size_t>(i)] = solver.eigenvalues()[i];

    rep.trivial_index = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(rep.multipliers[static_cast<size_t>(i)] - 1.0) <
            std::abs(rep.multipliers[static_cast<size_t>(rep.trivial_index)] - 1.0))
            rep.trivial_index = i;

    const double tol = 1e-4;
    bool all_inside = true, any_outside = false;
    for (int i = 0; i < 3; ++i) {
        if (i == rep.trivial_index) continue;
        const double mod = std::abs(rep.multipliers[static_cast<size_t>(i)]);
        if (mod >= 1.0 - tol) all_inside = false;
        if (mod > 1.0 + tol) any_outside = true;
    }
    rep.classification = any_outside ? OrbitStability::unstable
                         : all_inside ? OrbitStability::asymptotically_stable
                                      : OrbitStability::marginal;
    return rep;
}

double shift_operator_compare(const PerturbedSystem& a, const PerturbedSystem& b, double T,
                              const std::vector<Vec3>& points, const IntegratorConfig& cfg) {
    if (!(a.base() == b.base()))
        throw ConstraintError("shift-operator comparison requires identical base fields");
    if (!a.all_signals_odd() || !b.all_signals_odd())
        throw ConstraintError("shift-operator comparison requires all perturbation signals odd");
    if (T < 0) throw std::invalid_argument("shift_operator_compare requires T >= 0");
    if (T == 0) return 0.0;

    double worst = 0;
    for (const Vec3& p : points) {
        const Vec3 ea = flow(a, p, -T, T, cfg);
        const Vec3 eb = flow(b, p, -T, T, cfg);
        worst = std::max(worst, distance(ea, eb));
    }
    return worst;
}

namespace {

/// Indices of the perturbations whose alpha multiplies the z equation
/// together with the base (the "1 + alpha sum" group of the V = -z^3
/// instability argument).
std::vector<size_t> vdot_group(Family f) {
    switch (f) {
        case Family::eq5:
        case Family::eq6: return {0, 1};
        case Family::eq7: return {0};
        default: break;
    }
    throw ConstraintError("instability probe applies to families eq5, eq6, eq7 only");
}

}  // namespace

InstabilityReport instability_probe(const PerturbedSystem& sys, double radius_in,
                                    double radius_out, int points, std::uint64_t seed,
                                    const IntegratorConfig& cfg, double t_cap) {
    if (!(radius_in > 0 && radius_out > radius_in))
        throw std::invalid_argument("instability probe requires 0 < radius_in < radius_out");

    const auto group = vdot_group(sys.family());
    const Params& p = sys.params();
    if (sys.family() == Family::eq5) {
        if (!p.e.is_zero())
            throw ConstraintError("instability probe (eq5): constraint e = 0 violated (e=" +
                                  p.e.str() + ")");
    } else if (!p.a.is_zero()) {
        throw ConstraintError("instability probe (eq6/eq7): constraint a = 0 violated (a=" +
                              p.a.str() + ")");
    }

    InstabilityReport rep;

    // dV/dt for V = -z^3 along trajectories is -3z^2 * (z-component of
    // the right-hand side); the theorem's factored form is exact.
    const Polynomial minus_3z2 = Polynomial::term(Rational(-3), Monomial{0, 0, 2});
    const Polynomial expect =
        Polynomial::term(Rational(3), Monomial{2, 0, 2}) +
        Polynomial::term(Rational(3), Monomial{0, 2, 2}) +
        Polynomial::term(Rational(3), Monomial{0, 0, 4});  // 3z^2(x^2+y^2+z^2)
    rep.vdot_factor = expect.str();

    rep.symbolic_ok = (minus_3z2 * sys.base().pz) == expect;
    for (size_t i = 0; i < sys.perturbations().size(); ++i) {
        const Polynomial contrib = minus_3z2 * sys.perturbations()[i].delta.pz;
        const bool in_group = std::find(group.begin(), group.end(), i) != group.end();
        if (in_group ? !(contrib == expect) : !contrib.is_zero()) rep.symbolic_ok = false;
    }

    Signal alpha_sum;
    for (size_t i : group) alpha_sum = alpha_sum.plus(sys.perturbations()[i].signal);
    double lo = 0;
    const int grid = 100000;
    for (int i = 0; i <= grid; ++i)
        lo = std::min(lo, alpha_sum.eval(1000.0 * i / grid));
    rep.alpha_sum_min = lo;
    rep.hypothesis_ok = 1.0 + lo > 0.0;

    // Numeric escape: seeded starts on the sphere |x| = radius_in in
    // the lower polar cap (V > 0 needs z < 0; the escape-time cap
    // bounds how close to the equator a start may sit).
    Rng rng(seed);
    const RhsFn rhs = state_rhs(sys);
    for (int n = 0; n < points; ++n) {
        const double zfrac = rng.uniform(0.3, 1.0);
        const double phi = rng.uniform(0.0, kTwoPi);
        const double s = std::sqrt(std::max(0.0, 1.0 - zfrac * zfrac));
        const Vec3 start{radius_in * s * std::cos(phi), radius_in * s * std::sin(phi),
                         -radius_in * zfrac};

        InstabilityReport::Escape esc{start, false, t_cap};
        std::vector<double> y{start.x, start.y, start.z};
        StepObserver watch = [&](const StepPoint& sp) {
            const double r2 =
                sp.y[0] * sp.y[0] + sp.y[1] * sp.y[1] + sp.y[2] * sp.y[2];
            if (r2 >= radius_out * radius_out) {
                esc.escaped = true;
                esc.t_exit = sp.t;
                return false;
            }
            return true;
        };
        integrate_core(rhs, 3, y, 0.0, t_cap, cfg, watch);
        rep.escapes.push_back(esc);
    }
    rep.all_escaped = std::all_of(rep.escapes.begin(), rep.escapes.end(),
                                  [](const auto& e) { return e.escaped; });
    return rep;
}

LyapunovSpectrum lyapunov_spectrum(const PerturbedSystem& sys, const Vec3& x0, double transient,
                                   double total, double renorm_interval,
                                   const IntegratorConfig& cfg) {
    if (!(total > transient && transient > 0))
        throw std::invalid_argument("lyapunov_spectrum requires total > transient > 0");
    if (!(renorm_interval > 0))
        throw std::invalid_argument("lyapunov_spectrum requires renorm interval > 0");

    const RhsFn rhs = state_tangent_rhs(sys);
    std::vector<double> y{x0.x, x0.y, x0.z, 1, 0, 0, 0, 1, 0, 0, 0, 1};
    double h_carry = 0;
    double now = 0;
    std::array<double, 3> acc{};

    // modified Gram-Schmidt on the tangent columns; returns the R diagonal
    auto renormalize = [&]() {
        std::array<double, 3> diag{};
        for (int c = 0; c < 3; ++c) {
            double col[3] = {y[static_cast<size_t>(3 + c)], y[static_cast<size_t>(6 + c)],
                             y[static_cast<size_t>(9 + c)]};
            for (int prev = 0; prev < c; ++prev) {
                double dot = 0;
                for (int r = 0; r < 3; ++r) dot += col[r] * y[static_cast<size_t>(3 + 3 * r + prev)];
                for (int r = 0; r < 3; ++r) col[r] -= dot * y[static_cast<size_t>(3 + 3 * r + prev)];
            }
            const double nrm = std::sqrt(col[0] * col[0] + col[1] * col[1] + col[2] * col[2]);
            if (!(nrm > 0))
                throw BlowUpError("tangent frame degenerated during Lyapunov run", now,
                                  {y[0], y[1], y[2]});
            diag[static_cast<size_t>(c)] = nrm;
            for (int r = 0; r < 3; ++r) y[static_cast<size_t>(3 + 3 * r + c)] = col[r] / nrm;
        }
        return diag;
    };

    auto run_phase = [&](double t_from, double t_to, bool accumulate) {
        double t = t_from;
        while (t < t_to - 1e-12) {
            const double t_next = std::min(t + renorm_interval, t_to);
            integrate_core(rhs, 12, y, t, t_next, cfg, {}, &h_carry);
            now = t_next;
            const auto diag = renormalize();
            if (accumulate)
                for (int i = 0; i < 3; ++i) acc[static_cast<size_t>(i)] += std::log(diag[static_cast<size_t>(i)]);
            t = t_next;
        }
    };

    run_phase(0.0, transient, false);
    run_phase(transient, total, true);

    LyapunovSpectrum spec;
    const double window = total - transient;
    for (int i = 0; i < 3; ++i) spec.exponents[static_cast<size_t>(i)] = acc[static_cast<size_t>(i)] / window;
    std::sort(spec.exponents.begin(), spec.exponents.end(), std::greater<>());
    spec.transient = transient;
    spec.total = total;
    spec.renorm_interval = renorm_interval;
    return spec;
}

}  // namespace langford
