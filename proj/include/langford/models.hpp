#pragma once

#include <complex>
#include <string>
#include <vector>

#include "langford/polynomial.hpp"
#include "langford/rational.hpp"
#include "langford/signal.hpp"
#include "langford/vec3.hpp"

namespace langford {

/// System parameters of x' = (ax+by+xz, cx+dy+yz, ez-x^2-y^2-z^2).
struct Params {
    Rational a, b, c, d, e;
};

enum class Family { base, eq5, eq6, eq7 };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// (ax+by+xz, cx+dy+yz, ez-x^2-y^2-z^2)
PolyVectorField build_base(const Params& p);

// Perturbation generators. Each preserves the reflecting function of
// the base system under the parameter constraints of its family.
PolyVectorField delta_rescale(const Params& p);                 // the field itself
PolyVectorField delta_radial(const Params& p);                  // (x(a+z), y(a+z), ez-x^2-y^2-z^2)
PolyVectorField delta_rotation();                               // (y, -x, 0)
PolyVectorField delta_ring_quintic(const Params& p);            // (-y, x, 0) * (x^2+y^2)(4az+x^2+y^2+2z^2)
PolyVectorField delta_ring_quintic_weighted(const Params& p, const Monomial& weight);  // weight in {x^2, xy, y^2}

/// Fast numeric form of a Polynomial: flat (coefficient, exponents) terms.
struct CompiledPoly {
    struct Term {
        double c;
        int i, j, k;
    };
    std::vector<Term> terms;
    int max_exp = 0;

    static CompiledPoly from(const Polynomial& p);
    double eval(const double* xp, const double* yp, const double* zp) const;
};

struct CompiledField {
    CompiledPoly c[3];
    CompiledPoly jac[3][3];
    static CompiledField from(const PolyVectorField& f);
};

/// Base field plus perturbation terms delta_i * alpha_i(t). Immutable
/// after construction; every delta is admissibility-checked against
/// the base at construction time.
class PerturbedSystem {
public:
    struct Perturbation {
        PolyVectorField delta;
        Signal signal;
    };

    static PerturbedSystem base_system(const Params& p);
    /// requires c = -b, d = a
    static PerturbedSystem eq5(const Params& p, Signal a1, Signal a2, Signal a3);
    /// requires c = -b, d = a, e = -2a
    static PerturbedSystem eq6(const Params& p, Signal a1, Signal a2, Signal a3, Signal a4);
    /// requires b = c = 0, d = a, e = -2a
    static PerturbedSystem eq7(const Params& p, Signal a1, Signal a2, Signal a3, Signal a4,
                               Signal a5);
    /// Arbitrary autonomous polynomial field, no perturbations.
    static PerturbedSystem custom(PolyVectorField base);

    Family family() const { return family_; }
    const Params& params() const { return params_; }
    const PolyVectorField& base() const { return base_; }
    const std::vector<Perturbation>& perturbations() const { return terms_; }
    const Signal& signal(size_t i) const { return terms_[i].signal; }

    bool all_signals_odd() const;

    /// base(p) + sum_i alpha_i(t) * delta_i(p)
    Vec3 rhs(double t, const Vec3& p) const;
    /// Spatial Jacobian of the full time-dependent right-hand side.
    Mat3 jacobian(double t, const Vec3& p) const;
    /// rhs with caller-supplied signal values (supports signals outside
    /// the trigonometric class).
    Vec3 rhs_with_alphas(const std::vector<double>& alphas, const Vec3& p) const;

private:
    PerturbedSystem(Family f, Params p, PolyVectorField base, std::vector<Perturbation> terms,
                    bool check_admissibility);

    Family family_;
    Params params_;
    PolyVectorField base_;
    std::vector<Perturbation> terms_;

    CompiledField cbase_;
    std::vector<CompiledField> cterms_;
    int max_exp_ = 0;
};

/// Stationary point of the base field with its Jacobian eigenvalues.
struct Equilibrium {
    Vec3 location;
    std::array<std::complex<double>, 3> eigenvalues;  // sorted: real desc, then imag asc
};

/// Equilibria O = (0,0,0) and G = (0,0,-2a) of the base field; requires
/// e = -2a so that G is stationary. Eigenvalues are computed numerically
/// from the exact Jacobian and checked against the closed forms
/// (-2a, a+-bi) at O and (2a, -a+-bi) at G.
std::pair<Equilibrium, Equilibrium> equilibrium_eigenvalues(const Params& p);

}  // namespace langford
