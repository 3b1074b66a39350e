#pragma once

#include <utility>
#include <vector>

#include "langford/polynomial.hpp"
#include "langford/rational_matrix.hpp"

namespace langford {

/// Residual of the perturbation-admissibility identity for an
/// autonomous candidate field: (dDelta/dv) X - (dX/dv) Delta with
/// v = (x, y, z). Delta preserves the reflecting function of
/// x' = X(x) iff this is the exact zero field.
PolyVectorField admissibility_residual(const PolyVectorField& X, const PolyVectorField& delta);

bool is_admissible(const PolyVectorField& X, const PolyVectorField& delta);

/// Coefficient layout for the degree-bounded polynomial ansatz: one
/// slot per (component, monomial) pair, component-major, monomials in
/// canonical graded-lex order within each component.
struct PerturbationAnsatz {
    int degree_bound = 0;
    std::vector<std::pair<int, Monomial>> slots;

    static PerturbationAnsatz up_to_degree(int n);
    PolyVectorField field_from(const std::vector<Rational>& coeffs) const;
};

/// All polynomial admissible perturbations of X up to total degree n:
/// assembles the linear map (ansatz coefficients) -> (residual
/// coefficients) and returns its exact nullspace as vector fields.
std::vector<PolyVectorField> find_admissible_basis(const PolyVectorField& X, int n);

/// True iff candidate is an exact rational linear combination of basis.
bool spans(const std::vector<PolyVectorField>& basis, const PolyVectorField& candidate);

/// Monomials of total degree <= n in canonical graded-lex order.
std::vector<Monomial> monomials_up_to_degree(int n);

}  // namespace langford
