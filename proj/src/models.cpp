#include "langford/models.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "langford/errors.hpp"
#include "langford/perturbation.hpp"

namespace langford {

namespace {

Polynomial mono(const Rational& c, int i, int j, int k) {
    return Polynomial::term(c, Monomial{i, j, k});
}

void require(bool ok, const std::string& builder, const std::string& constraint,
             const Params& p) {
    if (ok) return;
    throw ConstraintError(builder + ": constraint " + constraint +
                          " violated (a=" + p.a.str() + ", b=" + p.b.str() + ", c=" + p.c.str() +
                          ", d=" + p.d.str() + ", e=" + p.e.str() + ")");
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::base: return "base";
        case Family::eq5: return "eq5";
        case Family::eq6: return "eq6";
        case Family::eq7: return "eq7";
    }
    return "base";
}

Family family_from_name(const std::string& name) {
    if (name == "base") return Family::base;
    if (name == "eq5") return Family::eq5;
    if (name == "eq6") return Family::eq6;
    if (name == "eq7") return Family::eq7;
    throw ParseError("unknown system family '" + name + "'");
}

PolyVectorField build_base(const Params& p) {
    PolyVectorField f;
    f.px = mono(p.a, 1, 0, 0) + mono(p.b, 0, 1, 0) + mono(Rational(1), 1, 0, 1);
    f.py = mono(p.c, 1, 0, 0) + mono(p.d, 0, 1, 0) + mono(Rational(1), 0, 1, 1);
    f.pz = mono(p.e, 0, 0, 1) + mono(Rational(-1), 2, 0, 0) + mono(Rational(-1), 0, 2, 0) +
           mono(Rational(-1), 0, 0, 2);
    return f;
}

PolyVectorField delta_rescale(const Params& p) { return build_base(p); }

PolyVectorField delta_radial(const Params& p) {
    PolyVectorField f;
    f.px = mono(p.a, 1, 0, 0) + mono(Rational(1), 1, 0, 1);
    f.py = mono(p.a, 0, 1, 0) + mono(Rational(1), 0, 1, 1);
    f.pz = mono(p.e, 0, 0, 1) + mono(Rational(-1), 2, 0, 0) + mono(Rational(-1), 0, 2, 0) +
           mono(Rational(-1), 0, 0, 2);
    return f;
}

PolyVectorField delta_rotation() {
    PolyVectorField f;
    f.px = mono(Rational(1), 0, 1, 0);
    f.py = mono(Rational(-1), 1, 0, 0);
    return f;
}

namespace {

/// 4az + x^2 + y^2 + 2z^2
Polynomial ring_factor(const Params& p) {
    return mono(p.a * Rational(4), 0, 0, 1) + mono(Rational(1), 2, 0, 0) +
           mono(Rational(1), 0, 2, 0) + mono(Rational(2), 0, 0, 2);
}

}  // namespace

PolyVectorField delta_ring_quintic(const Params& p) {
    const Polynomial r2 = mono(Rational(1), 2, 0, 0) + mono(Rational(1), 0, 2, 0);
    const Polynomial f = r2 * ring_factor(p);
    PolyVectorField d;
    d.px = -(Polynomial::variable(Var::y) * f);
    d.py = Polynomial::variable(Var::x) * f;
    return d;
}

PolyVectorField delta_ring_quintic_weighted(const Params& p, const Monomial& weight) {
    if (weight.degree() != 2 || weight.ez != 0)
        throw std::invalid_argument("weight monomial must be one of x^2, x*y, y^2");
    const Polynomial f = Polynomial::term(Rational(1), weight) * ring_factor(p);
    PolyVectorField d;
    d.px = Polynomial::variable(Var::y) * f;
    d.py = -(Polynomial::variable(Var::x) * f);
    return d;
}

CompiledPoly CompiledPoly::from(const Polynomial& p) {
    CompiledPoly cp;
    for (const auto& [m, c] : p.terms()) {
        cp.terms.push_back({c.to_double(), m.ex, m.ey, m.ez});
        cp.max_exp = std::max({cp.max_exp, m.ex, m.ey, m.ez});
    }
    return cp;
}

double CompiledPoly::eval(const double* xp, const double* yp, const double* zp) const {
    double s = 0;
    for (const auto& t : terms) s += t.c * xp[t.i] * yp[t.j] * zp[t.k];
    return s;
}

CompiledField CompiledField::from(const PolyVectorField& f) {
    CompiledField cf;
    const auto jac = f.jacobian();
    for (int i = 0; i < 3; ++i) {
        cf.c[i] = CompiledPoly::from(f.component(i));
        for (int j = 0; j < 3; ++j) cf.jac[i][j] = CompiledPoly::from(jac[i][j]);
    }
    return cf;
}

PerturbedSystem::PerturbedSystem(Family f, Params p, PolyVectorField base,
                                 std::vector<Perturbation> terms, bool check_admissibility)
    : family_(f), params_(std::move(p)), base_(std::move(base)), terms_(std::move(terms)) {
    if (check_admissibility) {
        for (size_t i = 0; i < terms_.size(); ++i) {
            if (!is_admissible(base_, terms_[i].delta))
                throw std::logic_error("perturbation " + std::to_string(i + 1) +
                                       " fails the admissibility identity against its base");
        }
    }
    cbase_ = CompiledField::from(base_);
    max_exp_ = base_.degree();
    for (const auto& t : terms_) {
        cterms_.push_back(CompiledField::from(t.delta));
        max_exp_ = std::max(max_exp_, t.delta.degree());
    }
    max_exp_ = std::max(max_exp_, 1);
    if (max_exp_ > 15) throw std::invalid_argument("field degree exceeds evaluator bound");
}

PerturbedSystem PerturbedSystem::base_system(const Params& p) {
    return PerturbedSystem(Family::base, p, build_base(p), {}, false);
}

PerturbedSystem PerturbedSystem::eq5(const Params& p, Signal a1, Signal a2, Signal a3) {
    require(p.c == -p.b, "build_eq5", "c = -b", p);
    require(p.d == p.a, "build_eq5", "d = a", p);
    std::vector<Perturbation> terms;
    terms.push_back({delta_rescale(p), std::move(a1)});
    terms.push_back({delta_radial(p), std::move(a2)});
    terms.push_back({delta_rotation(), std::move(a3)});
    return PerturbedSystem(Family::eq5, p, build_base(p), std::move(terms), true);
}

PerturbedSystem PerturbedSystem::eq6(const Params& p, Signal a1, Signal a2, Signal a3,
                                     Signal a4) {
    require(p.c == -p.b, "build_eq6", "c = -b", p);
    require(p.d == p.a, "build_eq6", "d = a", p);
    require(p.e == -(p.a * Rational(2)), "build_eq6", "e = -2a", p);
    std::vector<Perturbation> terms;
    terms.push_back({delta_rescale(p), std::move(a1)});
    terms.push_back({delta_radial(p), std::move(a2)});
    terms.push_back({delta_rotation(), std::move(a3)});
    terms.push_back({delta_ring_quintic(p), std::move(a4)});
    return PerturbedSystem(Family::eq6, p, build_base(p), std::move(terms), true);
}

PerturbedSystem PerturbedSystem::eq7(const Params& p, Signal a1, Signal a2, Signal a3, Signal a4,
                                     Signal a5) {
    require(p.b == Rational(0), "build_eq7", "b = 0", p);
    require(p.c == Rational(0), "build_eq7", "c = 0", p);
    require(p.d == p.a, "build_eq7", "d = a", p);
    require(p.e == -(p.a * Rational(2)), "build_eq7", "e = -2a", p);
    std::vector<Perturbation> terms;
    terms.push_back({delta_rescale(p), std::move(a1)});
    terms.push_back({delta_rotation(), std::move(a2)});
    terms.push_back({delta_ring_quintic_weighted(p, Monomial{2, 0, 0}), std::move(a3)});
    terms.push_back({delta_ring_quintic_weighted(p, Monomial{1, 1, 0}), std::move(a4)});
    terms.push_back({delta_ring_quintic_weighted(p, Monomial{0, 2, 0}), std::move(a5)});
    return PerturbedSystem(Family::eq7, p, build_base(p), std::move(terms), true);
}

PerturbedSystem PerturbedSystem::custom(PolyVectorField base) {
    return PerturbedSystem(Family::base, Params{}, std::move(base), {}, false);
}

bool PerturbedSystem::all_signals_odd() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const Perturbation& t) { return t.signal.is_odd(); });
}

namespace {

void fill_powers(double v, int n, double* out) {
    out[0] = 1;
    for (int i = 1; i <= n; ++i) out[i] = out[i - 1] * v;
}

}  // namespace

Vec3 PerturbedSystem::rhs(double t, const Vec3& p) const {
    double xp[16], yp[16], zp[16];
    fill_powers(p.x, max_exp_, xp);
    fill_powers(p.y, max_exp_, yp);
    fill_powers(p.z, max_exp_, zp);
    Vec3 v{cbase_.c[0].eval(xp, yp, zp), cbase_.c[1].eval(xp, yp, zp),
           cbase_.c[2].eval(xp, yp, zp)};
    for (size_t i = 0; i < cterms_.size(); ++i) {
        const double a = terms_[i].signal.eval(t);
        if (a == 0.0) continue;
        for (int comp = 0; comp < 3; ++comp)
            v[comp] += a * cterms_[i].c[comp].eval(xp, yp, zp);
    }
    return v;
}

Vec3 PerturbedSystem::rhs_with_alphas(const std::vector<double>& alphas, const Vec3& p) const {
    if (alphas.size() != terms_.size())
        throw std::invalid_argument("alpha count does not match perturbation count");
    double xp[16], yp[16], zp[16];
    fill_powers(p.x, max_exp_, xp);
    fill_powers(p.y, max_exp_, yp);
    fill_powers(p.z, max_exp_, zp);
    Vec3 v{cbase_.c[0].eval(xp, yp, zp), cbase_.c[1].eval(xp, yp, zp),
           cbase_.c[2].eval(xp, yp, zp)};
    for (size_t i = 0; i < cterms_.size(); ++i) {
        if (alphas[i] == 0.0) continue;
        for (int comp = 0; comp < 3; ++comp)
            v[comp] += alphas[i] * cterms_[i].c[comp].eval(xp, yp, zp);
    }
    return v;
}

Mat3 PerturbedSystem::jacobian(double t, const Vec3& p) const {
    double xp[16], yp[16], zp[16];
    fill_powers(p.x, max_exp_, xp);
    fill_powers(p.y, max_exp_, yp);
    fill_powers(p.z, max_exp_, zp);
    Mat3 j;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) j.at(r, c) = cbase_.jac[r][c].eval(xp, yp, zp);
    for (size_t i = 0; i < cterms_.size(); ++i) {
        const double a = terms_[i].signal.eval(t);
        if (a == 0.0) continue;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) j.at(r, c) += a * cterms_[i].jac[r][c].eval(xp, yp, zp);
    }
    return j;
}

std::pair<Equilibrium, Equilibrium> equilibrium_eigenvalues(const Params& p) {
    if (p.e != -(p.a * Rational(2)))
        throw ConstraintError("equilibrium_eigenvalues: constraint e = -2a violated (e=" +
                              p.e.str() + ", a=" + p.a.str() + ")");

    const PolyVectorField base = build_base(p);
    const auto jac = base.jacobian();
    const double a = p.a.to_double();
    const double b = p.b.to_double();

    auto analyze = [&](const Vec3& loc, const std::array<std::complex<double>, 3>& expected) {
        const Vec3 f = base.evaluate(loc);
        if (f.norm() > 1e-12)
            throw std::logic_error("equilibrium candidate does not zero the base field");

        Eigen::Matrix3d m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) = jac[r][c].evaluate(loc);
        Eigen::EigenSolver<Eigen::Matrix3d> solver(m);

        std::array<std::complex<double>, 3> eig;
        for (int i = 0; i < 3; ++i) eig[i] = solver.eigenvalues()[i];
        std::sort(eig.begin(), eig.end(), [](const auto& u, const auto& v) {
            if (u.real() != v.real()) return u.real() > v.real();
            return u.imag() < v.imag();
        });

        // greedy matching against the closed forms (conjugate pairs make
        // a sorted elementwise comparison fragile)
        std::array<bool, 3> used{};
        for (const auto& want : expected) {
            int best = -1;
            double best_d = 0;
            for (int i = 0; i < 3; ++i) {
                if (used[static_cast<size_t>(i)]) continue;
                const double d = std::abs(eig[static_cast<size_t>(i)] - want);
                if (best < 0 || d < best_d) { best = i; best_d = d; }
            }
            used[static_cast<size_t>(best)] = true;
            if (best_d > 1e-8 * (1.0 + std::abs(want)))
                throw std::logic_error("numeric equilibrium eigenvalues drifted from closed form");
        }
        return Equilibrium{loc, eig};
    };

    using C = std::complex<double>;
    const Equilibrium at_origin =
        analyze({0, 0, 0}, {C(-2 * a, 0), C(a, b), C(a, -b)});
    const Equilibrium at_g =
        analyze({0, 0, -2 * a}, {C(2 * a, 0), C(-a, b), C(-a, -b)});
    return {at_origin, at_g};
}

}  // namespace langford
