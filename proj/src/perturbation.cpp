#include "langford/perturbation.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace langford {

PolyVectorField admissibility_residual(const PolyVectorField& X, const PolyVectorField& delta) {
    const auto jd = delta.jacobian();
    const auto jx = X.jacobian();
    PolyVectorField r;
    for (int i = 0; i < 3; ++i) {
        Polynomial s;
        for (int c = 0; c < 3; ++c) {
            s += jd[i][c] * X.component(c);
            s -= jx[i][c] * delta.component(c);
        }
        r.component(i) = s;
    }
    return r;
}

bool is_admissible(const PolyVectorField& X, const PolyVectorField& delta) {
    return admissibility_residual(X, delta).is_zero();
}

std::vector<Monomial> monomials_up_to_degree(int n) {
    std::vector<Monomial> ms;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j)
            for (int k = 0; i + j + k <= n; ++k) ms.push_back(Monomial{i, j, k});
    std::sort(ms.begin(), ms.end(), GradedLexDescending{});
    return ms;
}

PerturbationAnsatz PerturbationAnsatz::up_to_degree(int n) {
    if (n < 0) throw std::invalid_argument("ansatz degree bound must be >= 0");
    PerturbationAnsatz a;
    a.degree_bound = n;
    const auto ms = monomials_up_to_degree(n);
    for (int comp = 0; comp < 3; ++comp)
        for (const auto& m : ms) a.slots.emplace_back(comp, m);
    return a;
}

PolyVectorField PerturbationAnsatz::field_from(const std::vector<Rational>& coeffs) const {
    if (coeffs.size() != slots.size())
        throw std::invalid_argument("coefficient vector does not match ansatz slots");
    PolyVectorField f;
    for (size_t i = 0; i < slots.size(); ++i)
        f.component(slots[i].first).add_term(coeffs[i], slots[i].second);
    return f;
}

std::vector<PolyVectorField> find_admissible_basis(const PolyVectorField& X, int n) {
    const auto ansatz = PerturbationAnsatz::up_to_degree(n);

    // The residual is linear in Delta; equate its coefficients to zero
    // monomial-by-monomial up to the largest degree that can appear.
    const int row_degree = n + std::max(X.degree() - 1, 1);
    const auto row_monomials = monomials_up_to_degree(row_degree);
    std::map<Monomial, int, GradedLexDescending> row_index;
    for (const auto& m : row_monomials)
        row_index.emplace(m, static_cast<int>(row_index.size()));
    const int rows_per_comp = static_cast<int>(row_monomials.size());

    RationalMatrix mat(3 * rows_per_comp, static_cast<int>(ansatz.slots.size()));
    for (size_t col = 0; col < ansatz.slots.size(); ++col) {
        PolyVectorField unit;
        unit.component(ansatz.slots[col].first) =
            Polynomial::term(Rational(1), ansatz.slots[col].second);
        const PolyVectorField res = admissibility_residual(X, unit);
        for (int comp = 0; comp < 3; ++comp) {
            for (const auto& [m, c] : res.component(comp).terms()) {
                const auto it = row_index.find(m);
                if (it == row_index.end())
                    throw std::logic_error("residual degree exceeds assembled monomial bound");
                mat.at(comp * rows_per_comp + it->second, static_cast<int>(col)) = c;
            }
        }
    }

    std::vector<PolyVectorField> basis;
    for (const auto& v : mat.nullspace()) {
        PolyVectorField f = ansatz.field_from(v);
        if (!is_admissible(X, f))
            throw std::logic_error("nullspace vector failed the admissibility recheck");
        basis.push_back(std::move(f));
    }
    return basis;
}

bool spans(const std::vector<PolyVectorField>& basis, const PolyVectorField& candidate) {
    if (candidate.is_zero()) return true;
    if (basis.empty()) return false;

    // collect every (component, monomial) slot present in basis or candidate
    std::map<std::pair<int, Monomial>, int,
             decltype([](const auto& a, const auto& b) {
                 if (a.first != b.first) return a.first < b.first;
                 return GradedLexDescending{}(a.second, b.second);
             })>
        slot_index;
    auto note = [&](const PolyVectorField& f) {
        for (int comp = 0; comp < 3; ++comp)
            for (const auto& [m, c] : f.component(comp).terms())
                slot_index.emplace(std::make_pair(comp, m), 0);
    };
    for (const auto& f : basis) note(f);
    note(candidate);
    int next = 0;
    for (auto& [k, v] : slot_index) v = next++;

    RationalMatrix mat(next, static_cast<int>(basis.size()));
    for (size_t j = 0; j < basis.size(); ++j)
        for (int comp = 0; comp < 3; ++comp)
            for (const auto& [m, c] : basis[j].component(comp).terms())
                mat.at(slot_index.at({comp, m}), static_cast<int>(j)) = c;

    std::vector<Rational> rhs(static_cast<size_t>(next));
    for (int comp = 0; comp < 3; ++comp)
        for (const auto& [m, c] : candidate.component(comp).terms())
            rhs[static_cast<size_t>(slot_index.at({comp, m}))] = c;

    return mat.solve(rhs).has_value();
}

}  // namespace langford
