#pragma once

#include <functional>
#include <vector>

#include "langford/models.hpp"
#include "langford/vec3.hpp"

namespace langford {

enum class Method { rk4_fixed, dopri45_adaptive };

struct IntegratorConfig {
    Method method = Method::dopri45_adaptive;
    double step = 1e-3;    // rk4_fixed only
    double rtol = 1e-9;    // dopri45 only
    double atol = 1e-12;   // dopri45 only
    long max_steps = 10'000'000;
};

/// Time-stamped states, optionally with tangent (variational) matrices.
/// t is strictly monotone; tangent[0] is the identity when present.
struct Trajectory {
    struct Sample {
        double t;
        Vec3 state;
    };
    std::vector<Sample> samples;
    std::vector<Mat3> tangent;  // empty, or aligned with samples

    const Sample& back() const { return samples.back(); }
};

using RhsFn = std::function<void(double t, const double* y, double* dydt)>;

/// Observer called after every accepted step (and at t0); return false
/// to stop the integration early.
struct StepPoint {
    double t;
    const double* y;
    const double* dydt;
    int dim;
};
using StepObserver = std::function<bool(const StepPoint&)>;

/// Drives rhs from (t0, y) to t1, in either time direction, updating y
/// in place. h_carry, when non-null, carries the adaptive step size
/// across calls. Returns the time actually reached (t1 unless the
/// observer stopped early). Throws BlowUpError on nonfinite state or
/// step-budget exhaustion, carrying the last accepted (t, state).
double integrate_core(const RhsFn& rhs, int dim, std::vector<double>& y, double t0, double t1,
                      const IntegratorConfig& cfg, const StepObserver& observer = {},
                      double* h_carry = nullptr);

/// Trajectory at the integrator's accepted steps.
Trajectory integrate(const PerturbedSystem& sys, const Vec3& x0, double t0, double t1,
                     const IntegratorConfig& cfg);

/// Uniform grid of `samples` points (cubic Hermite interpolation of the
/// accepted steps). samples >= 2.
Trajectory integrate_sampled(const PerturbedSystem& sys, const Vec3& x0, double t0, double t1,
                             const IntegratorConfig& cfg, int samples);

/// State plus tangent flow M' = J(t, x(t)) M, M(t0) = I.
Trajectory integrate_with_tangent(const PerturbedSystem& sys, const Vec3& x0, double t0,
                                  double t1, const IntegratorConfig& cfg);

/// Endpoint only.
Vec3 flow(const PerturbedSystem& sys, const Vec3& x0, double t0, double t1,
          const IntegratorConfig& cfg);

/// RHS adapters used by the analysis layer (dim 3 and dim 12).
RhsFn state_rhs(const PerturbedSystem& sys);
RhsFn state_tangent_rhs(const PerturbedSystem& sys);

}  // namespace langford
