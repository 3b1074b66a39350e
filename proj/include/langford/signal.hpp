#pragma once

#include <vector>

namespace langford {

/// Finite trigonometric sum a1*sin(w1 t) + ... + b1*cos(v1 t) + ... + c.
/// The antiderivative from 0 is available in closed form, which keeps
/// the periodicity integral conditions free of quadrature error.
/// Oddness is structural: no cosine terms and no constant.
class Signal {
public:
    struct Term {
        double amp = 0;
        double freq = 0;  // nonzero for trig terms
    };

    Signal() = default;

    static Signal zero() { return Signal(); }
    static Signal sine(double amp, double freq);
    static Signal cosine(double amp, double freq);
    static Signal constant(double c);

    Signal& add_sine(double amp, double freq);
    Signal& add_cosine(double amp, double freq);
    Signal& add_constant(double c);

    Signal plus(const Signal& o) const;
    Signal scaled(double s) const;

    double eval(double t) const;
    /// Integral from 0 to t, exact closed form.
    double antiderivative(double t) const;

    bool is_zero() const { return sines_.empty() && cosines_.empty() && const_ == 0.0; }
    bool is_odd() const { return cosines_.empty() && const_ == 0.0; }
    /// True iff every term repeats with period T (constants always do).
    bool is_periodic(double T, double tol = 1e-9) const;

    const std::vector<Term>& sine_terms() const { return sines_; }
    const std::vector<Term>& cosine_terms() const { return cosines_; }
    double constant_term() const { return const_; }

private:
    std::vector<Term> sines_;
    std::vector<Term> cosines_;
    double const_ = 0;
};

}  // namespace langford
