#include "langford/rational_matrix.hpp"

#include <cassert>
#include <stdexcept>

namespace langford {

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
}

namespace {

struct Echelon {
    std::vector<std::vector<mpz_class>> rows;    // fraction-free row echelon form
    std::vector<std::pair<int, int>> pivots;     // (row, col)
};

/// Fraction-free Bareiss elimination. Rows are first scaled to integers
/// (lcm of denominators), then reduced with exact single-step division.
/// Pivot row = first row with a nonzero entry in the pivot column.
Echelon bareiss(const RationalMatrix& m) {
    const int nr = m.rows(), nc = m.cols();
    Echelon e;
    e.rows.assign(static_cast<size_t>(nr), std::vector<mpz_class>(static_cast<size_t>(nc)));
    for (int r = 0; r < nr; ++r) {
        mpz_class l(1);
        for (int c = 0; c < nc; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m.at(r, c).den().get_mpz_t());
        for (int c = 0; c < nc; ++c) {
            const Rational& q = m.at(r, c);
            e.rows[r][c] = q.num() * (l / q.den());
        }
    }

    mpz_class prev(1);
    int pr = 0;
    for (int col = 0; col < nc && pr < nr; ++col) {
        int sel = -1;
        for (int r = pr; r < nr; ++r)
            if (e.rows[r][col] != 0) { sel = r; break; }
        if (sel < 0) continue;
        std::swap(e.rows[pr], e.rows[sel]);

        const mpz_class piv = e.rows[pr][col];
        for (int r = pr + 1; r < nr; ++r) {
            for (int c = col + 1; c < nc; ++c) {
                mpz_class num = piv * e.rows[r][c] - e.rows[r][col] * e.rows[pr][c];
                mpz_divexact(e.rows[r][c].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            e.rows[r][col] = 0;
        }
        e.pivots.emplace_back(pr, col);
        prev = piv;
        ++pr;
    }
    return e;
}

/// Scale a rational vector to coprime integers with positive leading entry.
std::vector<Rational> primitive(const std::vector<Rational>& v) {
    mpz_class l(1);
    for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.den().get_mpz_t());
    std::vector<mpz_class> ints;
    ints.reserve(v.size());
    mpz_class g(0);
    for (const auto& q : v) {
        ints.push_back(q.num() * (l / q.den()));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints.back().get_mpz_t());
    }
    if (g == 0) g = 1;
    int lead_sign = 0;
    for (const auto& n : ints)
        if (n != 0) { lead_sign = sgn(n); break; }
    if (lead_sign < 0) g = -g;
    std::vector<Rational> out;
    out.reserve(v.size());
    for (auto& n : ints) {
        mpz_class q;
        mpz_divexact(q.get_mpz_t(), n.get_mpz_t(), g.get_mpz_t());
        out.emplace_back(q, mpz_class(1));
    }
    return out;
}

}  // namespace

int RationalMatrix::rank() const { return static_cast<int>(bareiss(*this).pivots.size()); }

std::vector<std::vector<Rational>> RationalMatrix::nullspace() const {
    const Echelon e = bareiss(*this);
    const int nc = cols_;
    std::vector<bool> is_pivot(static_cast<size_t>(nc), false);
    for (const auto& [r, c] : e.pivots) is_pivot[static_cast<size_t>(c)] = true;

    std::vector<std::vector<Rational>> basis;
    for (int f = 0; f < nc; ++f) {
        if (is_pivot[static_cast<size_t>(f)]) continue;
        std::vector<Rational> v(static_cast<size_t>(nc));
        v[static_cast<size_t>(f)] = Rational(1);
        for (auto it = e.pivots.rbegin(); it != e.pivots.rend(); ++it) {
            const auto [pr, pc] = *it;
            Rational s(0);
            for (int c = pc + 1; c < nc; ++c) {
                if (v[static_cast<size_t>(c)].is_zero() || e.rows[pr][c] == 0) continue;
                s += Rational(e.rows[pr][c], mpz_class(1)) * v[static_cast<size_t>(c)];
            }
            v[static_cast<size_t>(pc)] = -s / Rational(e.rows[pr][pc], mpz_class(1));
        }
        basis.push_back(primitive(v));
    }
    return basis;
}

std::optional<std::vector<Rational>> RationalMatrix::solve(const std::vector<Rational>& rhs) const {
    if (static_cast<int>(rhs.size()) != rows_)
        throw std::invalid_argument("RationalMatrix::solve: rhs size mismatch");

    // plain rational Gauss-Jordan on the augmented matrix
    std::vector<std::vector<Rational>> a(static_cast<size_t>(rows_),
                                         std::vector<Rational>(static_cast<size_t>(cols_) + 1));
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) a[r][c] = at(r, c);
        a[r][static_cast<size_t>(cols_)] = rhs[static_cast<size_t>(r)];
    }

    std::vector<int> pivot_col_of_row(static_cast<size_t>(rows_), -1);
    int pr = 0;
    for (int col = 0; col < cols_ && pr < rows_; ++col) {
        int sel = -1;
        for (int r = pr; r < rows_; ++r)
            if (!a[r][col].is_zero()) { sel = r; break; }
        if (sel < 0) continue;
        std::swap(a[pr], a[sel]);
        const Rational inv = Rational(1) / a[pr][col];
        for (int c = col; c <= cols_; ++c) a[pr][c] *= inv;
        for (int r = 0; r < rows_; ++r) {
            if (r == pr || a[r][col].is_zero()) continue;
            const Rational f = a[r][col];
            for (int c = col; c <= cols_; ++c) a[r][c] -= f * a[pr][c];
        }
        pivot_col_of_row[static_cast<size_t>(pr)] = col;
        ++pr;
    }
    for (int r = pr; r < rows_; ++r)
        if (!a[r][static_cast<size_t>(cols_)].is_zero()) return std::nullopt;

    std::vector<Rational> x(static_cast<size_t>(cols_));
    for (int r = 0; r < pr; ++r)
        x[static_cast<size_t>(pivot_col_of_row[static_cast<size_t>(r)])] = a[r][static_cast<size_t>(cols_)];
    return x;
}

}  // namespace langford
