#include "langford/rational.hpp"

#include <stdexcept>

#include "langford/errors.hpp"

namespace langford {

Rational::Rational(long n, long d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    q_ = mpq_class(n, d);
    q_.canonicalize();
}

Rational::Rational(const mpz_class& n, const mpz_class& d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    q_ = mpq_class(n) / mpq_class(d);
    q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    q_ /= o.q_;
    return *this;
}

Rational Rational::parse(std::string_view s) {
    const std::string text(s);
    if (text.empty()) throw ParseError("empty rational literal");

    const auto dot = text.find('.');
    if (dot != std::string::npos) {
        // decimal form: scale the fractional part by a power of ten
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        const size_t frac_len = text.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw ParseError("bad rational literal '" + text + "'");
        try {
            mpz_class num(digits, 10);
            mpz_class den(1);
            for (size_t i = 0; i < frac_len; ++i) den *= 10;
            return Rational(num, den);
        } catch (const std::invalid_argument&) {
            throw ParseError("bad rational literal '" + text + "'");
        }
    }

    try {
        mpq_class q(text, 10);
        if (q.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
        q.canonicalize();
        return Rational(q);
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal '" + text + "'");
    }
}

std::string Rational::str() const {
    if (is_integer()) return num().get_str();
    return num().get_str() + "/" + den().get_str();
}

}  // namespace langford
