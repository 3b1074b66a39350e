#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>

#include "langford/rational.hpp"
#include "langford/vec3.hpp"

namespace langford {

enum class Var { x = 0, y = 1, z = 2 };

/// Power product x^i y^j z^k.
struct Monomial {
    int ex = 0, ey = 0, ez = 0;

    int degree() const { return ex + ey + ez; }
    int exponent(Var v) const { return v == Var::x ? ex : (v == Var::y ? ey : ez); }

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded-lexicographic order with x > y > z; "less" means the monomial
/// comes LATER in display order, so iterating a map under this
/// comparator yields leading terms first.
struct GradedLexDescending {
    bool operator()(const Monomial& a, const Monomial& b) const {
        if (a.degree() != b.degree()) return a.degree() > b.degree();
        if (a.ex != b.ex) return a.ex > b.ex;
        if (a.ey != b.ey) return a.ey > b.ey;
        return a.ez > b.ez;
    }
};

/// Sparse polynomial in (x, y, z) with exact rational coefficients.
/// Zero coefficients are never stored; term order is canonical
/// graded-lex for display and serialization.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, GradedLexDescending>;

    Polynomial() = default;

    static Polynomial constant(const Rational& c);
    static Polynomial variable(Var v);
    static Polynomial term(const Rational& c, const Monomial& m);

    /// Inverse of str(); accepts the canonical text form.
    static Polynomial parse(std::string_view text);

    bool is_zero() const { return terms_.empty(); }
    /// Total degree; -1 for the zero polynomial.
    int degree() const;
    const TermMap& terms() const { return terms_; }
    Rational coefficient(const Monomial& m) const;

    void add_term(const Rational& c, const Monomial& m);

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial scaled(const Rational& c) const;

    /// Formal partial derivative.
    Polynomial partial(Var v) const;

    /// Numeric evaluation; coefficients converted to nearest double.
    double evaluate(double x, double y, double z) const;
    double evaluate(const Vec3& p) const { return evaluate(p.x, p.y, p.z); }

    /// Canonical text form: terms in graded-lex order, rational
    /// coefficients as p/q or integer, e.g. "x^2 - 2*x*y + 1/2".
    std::string str() const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    TermMap terms_;
};

/// Three-component polynomial vector field on R^3.
struct PolyVectorField {
    Polynomial px, py, pz;

    const Polynomial& component(int i) const { return i == 0 ? px : (i == 1 ? py : pz); }
    Polynomial& component(int i) { return i == 0 ? px : (i == 1 ? py : pz); }

    bool is_zero() const { return px.is_zero() && py.is_zero() && pz.is_zero(); }
    int degree() const;

    /// Entry (r, c) = d(component r)/d(variable c).
    std::array<std::array<Polynomial, 3>, 3> jacobian() const;

    /// Exact divergence (a polynomial; constant for the Langford family).
    Polynomial divergence() const;

    Vec3 evaluate(const Vec3& p) const {
        return {px.evaluate(p), py.evaluate(p), pz.evaluate(p)};
    }

    PolyVectorField operator+(const PolyVectorField& o) const {
        return {px + o.px, py + o.py, pz + o.pz};
    }
    PolyVectorField operator-(const PolyVectorField& o) const {
        return {px - o.px, py - o.py, pz - o.pz};
    }
    PolyVectorField scaled(const Rational& c) const {
        return {px.scaled(c), py.scaled(c), pz.scaled(c)};
    }

    friend bool operator==(const PolyVectorField&, const PolyVectorField&) = default;
};

}  // namespace langford
