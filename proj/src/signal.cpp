#include "langford/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace langford {

namespace {

const double kTwoPi = 6.28318530717958647692;

void merge_term(std::vector<Signal::Term>& terms, double amp, double freq) {
    if (amp == 0.0) return;
    for (auto& t : terms) {
        if (t.freq == freq) {
            t.amp += amp;
            if (t.amp == 0.0) {
                t = terms.back();
                terms.pop_back();
            }
            return;
        }
    }
    terms.push_back({amp, freq});
}

}  // namespace

Signal Signal::sine(double amp, double freq) { return Signal().add_sine(amp, freq); }
Signal Signal::cosine(double amp, double freq) { return Signal().add_cosine(amp, freq); }
Signal Signal::constant(double c) { return Signal().add_constant(c); }

Signal& Signal::add_sine(double amp, double freq) {
    if (freq == 0.0) throw std::invalid_argument("sine term requires nonzero frequency");
    merge_term(sines_, amp, freq);
    return *this;
}

Signal& Signal::add_cosine(double amp, double freq) {
    if (freq == 0.0) throw std::invalid_argument("cosine term requires nonzero frequency");
    merge_term(cosines_, amp, freq);
    return *this;
}

Signal& Signal::add_constant(double c) {
    const_ += c;
    return *this;
}

Signal Signal::plus(const Signal& o) const {
    Signal r = *this;
    for (const auto& t : o.sines_) merge_term(r.sines_, t.amp, t.freq);
    for (const auto& t : o.cosines_) merge_term(r.cosines_, t.amp, t.freq);
    r.const_ += o.const_;
    return r;
}

Signal Signal::scaled(double s) const {
    Signal r;
    if (s == 0.0) return r;
    for (const auto& t : sines_) r.sines_.push_back({t.amp * s, t.freq});
    for (const auto& t : cosines_) r.cosines_.push_back({t.amp * s, t.freq});
    r.const_ = const_ * s;
    return r;
}

double Signal::eval(double t) const {
    double v = const_;
    for (const auto& s : sines_) v += s.amp * std::sin(s.freq * t);
    for (const auto& c : cosines_) v += c.amp * std::cos(c.freq * t);
    return v;
}

double Signal::antiderivative(double t) const {
    double v = const_ * t;
    for (const auto& s : sines_) v += s.amp * (1.0 - std::cos(s.freq * t)) / s.freq;
    for (const auto& c : cosines_) v += c.amp * std::sin(c.freq * t) / c.freq;
    return v;
}

bool Signal::is_periodic(double T, double tol) const {
    if (T <= 0) return false;
    auto term_ok = [&](const Term& term) {
        const double cycles = term.freq * T / kTwoPi;
        return std::fabs(cycles - std::round(cycles)) <= tol;
    };
    for (const auto& s : sines_)
        if (!term_ok(s)) return false;
    for (const auto& c : cosines_)
        if (!term_ok(c)) return false;
    return true;
}

}  // namespace langford
