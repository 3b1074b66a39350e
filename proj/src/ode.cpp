#include "langford/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "langford/errors.hpp"

namespace langford {

namespace {

// Dormand-Prince 5(4) tableau (FSAL).
const double A21 = 1.0 / 5;
const double A31 = 3.0 / 40, A32 = 9.0 / 40;
const double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
const double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
             A54 = -212.0 / 729;
const double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
             A65 = -5103.0 / 18656;
const double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
             B6 = 11.0 / 84;
const double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
// 5th-order minus embedded 4th-order weights
const double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
             E6 = 22.0 / 525, E7 = -1.0 / 40;

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

std::array<double, 3> head3(const std::vector<double>& y) {
    return {y[0], y.size() > 1 ? y[1] : 0.0, y.size() > 2 ? y[2] : 0.0};
}

[[noreturn]] void blow_up(const std::string& why, double t, const std::vector<double>& y) {
    throw BlowUpError("integration failed: " + why + " at t = " + std::to_string(t), t,
                      head3(y));
}

/// Hairer-style initial step size guess.
double initial_step(const RhsFn& rhs, int dim, double t0, const std::vector<double>& y0,
                    const std::vector<double>& f0, double dir, double span,
                    const IntegratorConfig& cfg) {
    double d0 = 0, d1 = 0;
    for (int i = 0; i < dim; ++i) {
        const double sk = cfg.atol + cfg.rtol * std::fabs(y0[i]);
        d0 += (y0[i] / sk) * (y0[i] / sk);
        d1 += (f0[i] / sk) * (f0[i] / sk);
    }
    d0 = std::sqrt(d0 / dim);
    d1 = std::sqrt(d1 / dim);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);

    std::vector<double> y1(dim), f1(dim);
    for (int i = 0; i < dim; ++i) y1[i] = y0[i] + dir * h0 * f0[i];
    rhs(t0 + dir * h0, y1.data(), f1.data());
    double d2 = 0;
    for (int i = 0; i < dim; ++i) {
        const double sk = cfg.atol + cfg.rtol * std::fabs(y0[i]);
        d2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    d2 = std::sqrt(d2 / dim) / h0;

    const double dmax = std::max(d1, d2);
    const double h1 = dmax > 1e-15 ? std::pow(0.01 / dmax, 0.2) : std::max(1e-6, h0 * 1e-3);
    return std::min({100 * h0, h1, span});
}

double dopri45(const RhsFn& rhs, int dim, std::vector<double>& y, double t0, double t1,
               const IntegratorConfig& cfg, const StepObserver& observer, double* h_carry) {
    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::fabs(t1 - t0);
    double t = t0;

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    std::vector<double> ytmp(dim), ynew(dim);

    rhs(t, y.data(), k1.data());
    if (!all_finite(k1) || !all_finite(y)) blow_up("nonfinite initial data", t, y);
    if (observer && !observer({t, y.data(), k1.data(), dim})) return t;

    double h;
    if (h_carry && *h_carry > 0)
        h = std::min(*h_carry, span);
    else
        h = initial_step(rhs, dim, t0, y, k1, dir, span, cfg);
    h = std::max(h, 1e-300);

    long steps = 0;
    while (dir * (t1 - t) > 0) {
        if (++steps > cfg.max_steps) blow_up("step budget exhausted", t, y);

        const double remaining = std::fabs(t1 - t);
        bool last = false;
        if (h >= remaining) {
            h = remaining;
            last = true;
        }
        const double hd = dir * h;

        for (int i = 0; i < dim; ++i) ytmp[i] = y[i] + hd * A21 * k1[i];
        rhs(t + C2 * hd, ytmp.data(), k2.data());
        for (int i = 0; i < dim; ++i) ytmp[i] = y[i] + hd * (A31 * k1[i] + A32 * k2[i]);
        rhs(t + C3 * hd, ytmp.data(), k3.data());
        for (int i = 0; i < dim; ++i)
            ytmp[i] = y[i] + hd * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        rhs(t + C4 * hd, ytmp.data(), k4.data());
        for (int i = 0; i < dim; ++i)
            ytmp[i] = y[i] + hd * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        rhs(t + C5 * hd, ytmp.data(), k5.data());
        for (int i = 0; i < dim; ++i)
            ytmp[i] = y[i] +
                      hd * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        rhs(t + hd, ytmp.data(), k6.data());
        for (int i = 0; i < dim; ++i)
            ynew[i] = y[i] +
                      hd * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        rhs(t + hd, ynew.data(), k7.data());

        double err = 0;
        bool finite = all_finite(ynew) && all_finite(k7);
        if (finite) {
            for (int i = 0; i < dim; ++i) {
                const double ei = hd * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                                        E6 * k6[i] + E7 * k7[i]);
                const double sk =
                    cfg.atol + cfg.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
                err += (ei / sk) * (ei / sk);
            }
            err = std::sqrt(err / dim);
            finite = std::isfinite(err);
        }

        if (finite && err <= 1.0) {
            t = last ? t1 : t + hd;
            std::swap(y, ynew);
            std::swap(k1, k7);  // FSAL
            if (observer && !observer({t, y.data(), k1.data(), dim})) {
                if (h_carry) *h_carry = h;
                return t;
            }
            const double factor =
                err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= factor;
        } else {
            const double factor =
                finite ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.5;
            h *= factor;
            if (h < 1e-14 * std::max(1.0, std::fabs(t)))
                blow_up(finite ? "step size underflow" : "nonfinite state", t, y);
        }
    }
    if (h_carry) *h_carry = h;
    return t1;
}

double rk4_fixed(const RhsFn& rhs, int dim, std::vector<double>& y, double t0, double t1,
                 const IntegratorConfig& cfg, const StepObserver& observer) {
    if (cfg.step <= 0) throw std::invalid_argument("rk4_fixed requires step > 0");
    const double span = std::fabs(t1 - t0);
    const long n = std::max(1L, static_cast<long>(std::ceil(span / cfg.step)));
    if (n > cfg.max_steps) blow_up("step budget exhausted", t0, y);
    const double h = (t1 - t0) / static_cast<double>(n);

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), ytmp(dim);
    rhs(t0, y.data(), k1.data());
    if (observer && !observer({t0, y.data(), k1.data(), dim})) return t0;

    double t = t0;
    for (long s = 0; s < n; ++s) {
        rhs(t, y.data(), k1.data());
        for (int i = 0; i < dim; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, ytmp.data(), k2.data());
        for (int i = 0; i < dim; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, ytmp.data(), k3.data());
        for (int i = 0; i < dim; ++i) ytmp[i] = y[i] + h * k3[i];
        rhs(t + h, ytmp.data(), k4.data());
        for (int i = 0; i < dim; ++i)
            y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        t = (s + 1 == n) ? t1 : t0 + (s + 1) * h;
        if (!all_finite(y)) blow_up("nonfinite state", t, y);
        rhs(t, y.data(), k1.data());
        if (observer && !observer({t, y.data(), k1.data(), dim})) return t;
    }
    return t1;
}

}  // namespace

double integrate_core(const RhsFn& rhs, int dim, std::vector<double>& y, double t0, double t1,
                      const IntegratorConfig& cfg, const StepObserver& observer,
                      double* h_carry) {
    if (!std::isfinite(t0) || !std::isfinite(t1))
        throw std::invalid_argument("integration times must be finite");
    if (t0 == t1) {
        if (observer) {
            std::vector<double> f(dim);
            rhs(t0, y.data(), f.data());
            observer({t0, y.data(), f.data(), dim});
        }
        return t0;
    }
    if (cfg.method == Method::rk4_fixed) return rk4_fixed(rhs, dim, y, t0, t1, cfg, observer);
    return dopri45(rhs, dim, y, t0, t1, cfg, observer, h_carry);
}

RhsFn state_rhs(const PerturbedSystem& sys) {
    return [&sys](double t, const double* y, double* dydt) {
        const Vec3 f = sys.rhs(t, Vec3{y[0], y[1], y[2]});
        dydt[0] = f.x;
        dydt[1] = f.y;
        dydt[2] = f.z;
    };
}

RhsFn state_tangent_rhs(const PerturbedSystem& sys) {
    // y = (x, y, z, M row-major); M' = J(t, x) M
    return [&sys](double t, const double* y, double* dydt) {
        const Vec3 p{y[0], y[1], y[2]};
        const Vec3 f = sys.rhs(t, p);
        dydt[0] = f.x;
        dydt[1] = f.y;
        dydt[2] = f.z;
        const Mat3 j = sys.jacobian(t, p);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                double s = 0;
                for (int k = 0; k < 3; ++k) s += j.at(r, k) * y[3 + 3 * k + c];
                dydt[3 + 3 * r + c] = s;
            }
    };
}

namespace {

struct RawTrace {
    std::vector<double> t;
    std::vector<std::vector<double>> y;
    std::vector<std::vector<double>> f;
};

RawTrace trace_integration(const RhsFn& rhs, int dim, std::vector<double>& y, double t0,
                           double t1, const IntegratorConfig& cfg) {
    RawTrace tr;
    StepObserver obs = [&](const StepPoint& p) {
        tr.t.push_back(p.t);
        tr.y.emplace_back(p.y, p.y + p.dim);
        tr.f.emplace_back(p.dydt, p.dydt + p.dim);
        return true;
    };
    integrate_core(rhs, dim, y, t0, t1, cfg, obs);
    return tr;
}

Trajectory trajectory_from(const RawTrace& tr, bool with_tangent) {
    Trajectory out;
    out.samples.reserve(tr.t.size());
    for (size_t i = 0; i < tr.t.size(); ++i) {
        out.samples.push_back({tr.t[i], Vec3{tr.y[i][0], tr.y[i][1], tr.y[i][2]}});
        if (with_tangent) {
            Mat3 m;
            for (int k = 0; k < 9; ++k) m.m[static_cast<size_t>(k)] = tr.y[i][3 + k];
            out.tangent.push_back(m);
        }
    }
    return out;
}

}  // namespace

Trajectory integrate(const PerturbedSystem& sys, const Vec3& x0, double t0, double t1,
                     const IntegratorConfig& cfg) {
    std::vector<double> y{x0.x, x0.y, x0.z};
    const RawTrace tr = trace_integration(state_rhs(sys), 3, y, t0, t1, cfg);
    return trajectory_from(tr, false);
}

Trajectory integrate_with_tangent(const PerturbedSystem& sys, const Vec3& x0, double t0,
                                  double t1, const IntegratorConfig& cfg) {
    std::vector<double> y{x0.x, x0.y, x0.z, 1, 0, 0, 0, 1, 0, 0, 0, 1};
    const RawTrace tr = trace_integration(state_tangent_rhs(sys), 12, y, t0, t1, cfg);
    return trajectory_from(tr, true);
}

Trajectory integrate_sampled(const PerturbedSystem& sys, const Vec3& x0, double t0, double t1,
                             const IntegratorConfig& cfg, int samples) {
    if (samples < 2) throw std::invalid_argument("integrate_sampled requires samples >= 2");
    std::vector<double> y{x0.x, x0.y, x0.z};
    const RawTrace tr = trace_integration(state_rhs(sys), 3, y, t0, t1, cfg);

    Trajectory out;
    out.samples.reserve(static_cast<size_t>(samples));
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    size_t seg = 0;
    for (int i = 0; i < samples; ++i) {
        const double ts =
            (i == samples - 1) ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / (samples - 1);
        while (seg + 2 < tr.t.size() && dir * (ts - tr.t[seg + 1]) > 0) ++seg;
        const double ta = tr.t[seg], tb = tr.t[seg + 1];
        const double hseg = tb - ta;
        const double u = hseg == 0 ? 0 : (ts - ta) / hseg;
        const double u2 = u * u, u3 = u2 * u;
        const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u, h01 = -2 * u3 + 3 * u2,
                     h11 = u3 - u2;
        Vec3 p;
        for (int c = 0; c < 3; ++c)
            p[c] = h00 * tr.y[seg][c] + h10 * hseg * tr.f[seg][c] + h01 * tr.y[seg + 1][c] +
                   h11 * hseg * tr.f[seg + 1][c];
        out.samples.push_back({ts, p});
    }
    return out;
}

Vec3 flow(const PerturbedSystem& sys, const Vec3& x0, double t0, double t1,
          const IntegratorConfig& cfg) {
    std::vector<double> y{x0.x, x0.y, x0.z};
    integrate_core(state_rhs(sys), 3, y, t0, t1, cfg);
    return {y[0], y[1], y[2]};
}

}  // namespace langford
