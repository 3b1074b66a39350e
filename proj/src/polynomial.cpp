#include "langford/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "langford/errors.hpp"

namespace langford {

Polynomial Polynomial::constant(const Rational& c) {
    Polynomial p;
    p.add_term(c, Monomial{});
    return p;
}

Polynomial Polynomial::variable(Var v) {
    Monomial m;
    if (v == Var::x) m.ex = 1;
    if (v == Var::y) m.ey = 1;
    if (v == Var::z) m.ez = 1;
    Polynomial p;
    p.add_term(Rational(1), m);
    return p;
}

Polynomial Polynomial::term(const Rational& c, const Monomial& m) {
    Polynomial p;
    p.add_term(c, m);
    return p;
}

void Polynomial::add_term(const Rational& c, const Monomial& m) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int Polynomial::degree() const {
    if (terms_.empty()) return -1;
    return terms_.begin()->first.degree();  // leading term has maximal degree
}

Rational Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

Polynomial Polynomial::operator-() const {
    Polynomial r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(c, m);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(-c, m);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            r.add_term(ca * cb, Monomial{ma.ex + mb.ex, ma.ey + mb.ey, ma.ez + mb.ez});
    return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial r;
    if (c.is_zero()) return r;
    for (const auto& [m, coef] : terms_) r.terms_.emplace(m, coef * c);
    return r;
}

Polynomial Polynomial::partial(Var v) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
        const int e = m.exponent(v);
        if (e == 0) continue;
        Monomial d = m;
        if (v == Var::x) d.ex -= 1;
        if (v == Var::y) d.ey -= 1;
        if (v == Var::z) d.ez -= 1;
        r.add_term(c * Rational(e), d);
    }
    return r;
}

double Polynomial::evaluate(double x, double y, double z) const {
    double sum = 0;
    for (const auto& [m, c] : terms_) {
        double t = c.to_double();
        for (int i = 0; i < m.ex; ++i) t *= x;
        for (int i = 0; i < m.ey; ++i) t *= y;
        for (int i = 0; i < m.ez; ++i) t *= z;
        sum += t;
    }
    return sum;
}

namespace {

std::string monomial_str(const Monomial& m) {
    std::string s;
    const char* names[3] = {"x", "y", "z"};
    const int exps[3] = {m.ex, m.ey, m.ez};
    for (int v = 0; v < 3; ++v) {
        if (exps[v] == 0) continue;
        if (!s.empty()) s += "*";
        s += names[v];
        if (exps[v] > 1) s += "^" + std::to_string(exps[v]);
    }
    return s;
}

}  // namespace

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        const bool neg = c.sign() < 0;
        const Rational mag = neg ? -c : c;
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        const std::string vars = monomial_str(m);
        if (vars.empty()) {
            out += mag.str();
        } else if (mag == Rational(1)) {
            out += vars;
        } else {
            out += mag.str() + "*" + vars;
        }
    }
    return out;
}

namespace {

struct Scanner {
    std::string_view s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    char take() {
        skip_ws();
        return s[pos++];
    }

    std::string take_number() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/'))
            ++pos;
        if (pos == start) throw ParseError("expected number in polynomial at offset " +
                                           std::to_string(start));
        return std::string(s.substr(start, pos - start));
    }

    int take_exponent() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw ParseError("expected exponent in polynomial at offset " +
                                           std::to_string(start));
        return std::stoi(std::string(s.substr(start, pos - start)));
    }
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text) {
    Polynomial result;
    Scanner sc{text};
    bool first = true;
    while (!sc.done()) {
        int sign = 1;
        char c = sc.peek();
        if (c == '+' || c == '-') {
            sc.take();
            sign = (c == '-') ? -1 : 1;
        } else if (!first) {
            throw ParseError("expected '+' or '-' between polynomial terms");
        }
        first = false;

        Rational coef(sign);
        Monomial mono;
        bool expect_factor = true;
        bool saw_factor = false;
        while (expect_factor) {
            c = sc.peek();
            if (c == 'x' || c == 'y' || c == 'z') {
                sc.take();
                int e = 1;
                if (sc.peek() == '^') {
                    sc.take();
                    e = sc.take_exponent();
                }
                if (c == 'x') mono.ex += e;
                if (c == 'y') mono.ey += e;
                if (c == 'z') mono.ez += e;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                coef *= Rational::parse(sc.take_number());
            } else {
                throw ParseError("unexpected character '" + std::string(1, c) +
                                 "' in polynomial");
            }
            saw_factor = true;
            if (sc.peek() == '*') {
                sc.take();
            } else {
                expect_factor = false;
            }
        }
        if (!saw_factor) throw ParseError("empty term in polynomial");
        result.add_term(coef, mono);
    }
    return result;
}

int PolyVectorField::degree() const {
    return std::max({px.degree(), py.degree(), pz.degree()});
}

std::array<std::array<Polynomial, 3>, 3> PolyVectorField::jacobian() const {
    std::array<std::array<Polynomial, 3>, 3> j;
    const Var vars[3] = {Var::x, Var::y, Var::z};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) j[r][c] = component(r).partial(vars[c]);
    return j;
}

Polynomial PolyVectorField::divergence() const {
    return px.partial(Var::x) + py.partial(Var::y) + pz.partial(Var::z);
}

}  // namespace langford
