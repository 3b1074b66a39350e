#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "langford/models.hpp"
#include "langford/ode.hpp"

namespace langford {

/// Known exact solutions on the cycle x^2 + y^2 = R^2, z = -a:
///   base   x = R sin(bt),            R = sqrt(-a(a+e)), a(a+e) < 0
///   eq5    x = R sin(bt + P(t)),     P' = b a1 + a3
///   eq6    x = a sin(bt + P(t)),     P' = b a1 + a3 + a^4 a4
/// where P is the exact antiderivative of the signal combination.
class ClosedFormOrbit {
public:
    static ClosedFormOrbit base_cycle(const Params& p);
    static ClosedFormOrbit eq5_cycle(const Params& p, const Signal& a1, const Signal& a3);
    static ClosedFormOrbit eq6_cycle(const Params& p, const Signal& a1, const Signal& a3,
                                     const Signal& a4);
    /// Dispatch on the system family (base/eq5/eq6).
    static ClosedFormOrbit for_system(const PerturbedSystem& sys);

    Family family() const { return family_; }
    double radius() const { return std::fabs(amp_); }
    double z_level() const { return z_; }
    /// Phase-rate signal P' (zero for the base cycle).
    const Signal& phase_rate() const { return phase_rate_; }

    Vec3 point(double t) const;
    /// Analytic time derivative of point(t).
    Vec3 velocity(double t) const;

    /// Copy with the z-level displaced (test hook; breaks the solution).
    ClosedFormOrbit with_z_offset(double dz) const;

private:
    Family family_ = Family::base;
    double amp_ = 0;  // signed for the eq6 cycle
    double b_ = 0;
    double z_ = 0;
    Signal phase_rate_;
};

/// Max over sampled t in [t0, t1] of |d/dt closed_form - RHS(t, closed_form)|.
double orbit_residual(const PerturbedSystem& sys, const ClosedFormOrbit& orbit, int samples,
                      double t0 = 0.0, double t1 = 10.0);

/// |phi(t0 + T; t0, x0) - x0|
double return_map_gap(const PerturbedSystem& sys, const Vec3& x0, double t0, double period,
                      const IntegratorConfig& cfg);

enum class PeriodicityTheorem { T4i, T4ii, T5i, T5ii, T6i, T6ii };

std::string theorem_name(PeriodicityTheorem t);
PeriodicityTheorem theorem_from_name(const std::string& name);

/// Periodicity condition on the phase integral, evaluated with the
/// exact antiderivative:
///   T4: integral_0^{-2pi/|b|} of the combination = 2 pi k
///   T5: integral_0^{ 2pi/b } of the combination = 0
///   T6: integral_0^{ omega } of the combination = 2 pi k   (b = 0)
/// Combination: b a1 + a3 (eq5 variants i) or b a1 + a3 + a^4 a4 (eq6
/// variants ii). k is round-half-even(I / 2pi).
struct IntegralConditionReport {
    PeriodicityTheorem theorem;
    double upper_limit;
    double value;
    long k;
    double residual;
    bool satisfied;
    bool odd_by_construction;  // oddness substitute applies
    bool combo_periodic;       // combination repeats with the theorem period
};

IntegralConditionReport check_integral_condition(PeriodicityTheorem thm, const Params& p,
                                                 const std::vector<Signal>& signals,
                                                 double omega = 0.0, double tol = 1e-9);

enum class OrbitStability { asymptotically_stable, unstable, marginal };

std::string stability_name(OrbitStability s);

/// Monodromy analysis of a closed-form cycle: tangent flow over one
/// period from orbit.point(0). The trivial multiplier is the one
/// closest to 1; the others decide the classification (tol 1e-4).
struct FloquetReport {
    Mat3 monodromy;
    std::array<std::complex<double>, 3> multipliers;
    int trivial_index;
    OrbitStability classification;
};

FloquetReport floquet(const PerturbedSystem& sys, const ClosedFormOrbit& orbit, double period,
                      const IntegratorConfig& cfg);

/// Max over the given starts of |phi_A(T; -T, x0) - phi_B(T; -T, x0)|.
/// Requires identical base fields and all-odd signals on both systems.
double shift_operator_compare(const PerturbedSystem& a, const PerturbedSystem& b, double T,
                              const std::vector<Vec3>& points, const IntegratorConfig& cfg);

/// Instability of the origin via V = -z^3 (exact dV/dt identity plus
/// numeric escape from a small sphere). Hypotheses: eq5 with e = 0, or
/// eq6/eq7 with a = 0, and the relevant 1 + alpha sum bounded away
/// from 0 from below.
struct InstabilityReport {
    bool symbolic_ok;          // dV/dt = 3z^2(x^2+y^2+z^2) * (1 + alpha sum), exactly
    std::string vdot_factor;   // text of the polynomial factor
    double alpha_sum_min;      // sampled lower bound l of the alpha sum
    bool hypothesis_ok;        // 1 + l > 0
    struct Escape {
        Vec3 start;
        bool escaped;
        double t_exit;
    };
    std::vector<Escape> escapes;
    bool all_escaped;
};

InstabilityReport instability_probe(const PerturbedSystem& sys, double radius_in,
                                    double radius_out, int points, std::uint64_t seed,
                                    const IntegratorConfig& cfg, double t_cap = 1e4);

/// Classical tangent-flow algorithm with periodic QR (modified
/// Gram-Schmidt) reorthonormalization; log-norms are accumulated after
/// the transient and averaged over (total - transient).
struct LyapunovSpectrum {
    std::array<double, 3> exponents;  // sorted descending
    double transient;
    double total;
    double renorm_interval;

    double sum() const { return exponents[0] + exponents[1] + exponents[2]; }
};

LyapunovSpectrum lyapunov_spectrum(const PerturbedSystem& sys, const Vec3& x0, double transient,
                                   double total, double renorm_interval,
                                   const IntegratorConfig& cfg);

}  // namespace langford
