#pragma once

#include <optional>
#include <vector>

#include "langford/rational.hpp"

namespace langford {

/// Dense matrix of exact rationals. Backs the linearized admissibility
/// system; sizes stay small (a few hundred rows/columns).
class RationalMatrix {
public:
    RationalMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static RationalMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const Rational& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    int rank() const;

    /// Basis of the right nullspace via fraction-free (Bareiss)
    /// elimination, pivoting on the first nonzero entry in each column.
    /// One vector per pivot-free column, in ascending column order; each
    /// vector has coprime integer entries with positive leading entry.
    std::vector<std::vector<Rational>> nullspace() const;

    /// Exact solve of this * x = rhs (free variables set to 0);
    /// nullopt when inconsistent.
    std::optional<std::vector<Rational>> solve(const std::vector<Rational>& rhs) const;

private:
    int rows_, cols_;
    std::vector<Rational> a_;
};

}  // namespace langford
