#include "isoplex/exact_linalg.hpp"

#include <stdexcept>
#include <utility>

namespace isoplex::exact {

namespace {

/// Reduces `a` to row echelon form in place; returns pivot columns.
std::vector<std::size_t> echelon(Matrix<Rational>& a) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t p = row;
        while (p < a.rows() && a(p, col) == 0) ++p;
        if (p == a.rows()) continue;
        if (p != row)
            for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(p, c), a(row, c));
        for (std::size_t r = row + 1; r < a.rows(); ++r) {
            if (a(r, col) == 0) continue;
            const Rational f = a(r, col) / a(row, col);
            for (std::size_t c = col; c < a.cols(); ++c) a(r, c) -= f * a(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::size_t rank(Matrix<Rational> a) { return echelon(a).size(); }

Rational determinant(Matrix<Rational> a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = a.rows();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t p = col;
        while (p < n && a(p, col) == 0) ++p;
        if (p == n) return 0;
        if (p != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(p, c), a(col, c));
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (a(r, col) == 0) continue;
            const Rational f = a(r, col) / a(col, col);
            for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
        }
    }
    return det;
}

std::optional<std::vector<Rational>> solve_unique(Matrix<Rational> a, std::span<const Rational> b) {
    if (b.size() != a.rows()) throw std::invalid_argument("solve_unique: dimension mismatch");
    const std::size_t n = a.cols();
    Matrix<Rational> aug(a.rows(), n + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
        aug(r, n) = b[r];
    }
    const auto pivots = echelon(aug);
    if (!pivots.empty() && pivots.back() == n) return std::nullopt;  // inconsistent
    if (pivots.size() != n) return std::nullopt;                    // not full column rank
    std::vector<Rational> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational s = aug(i, n);
        for (std::size_t c = i + 1; c < n; ++c) s -= aug(i, c) * x[c];
        x[i] = s / aug(i, i);
    }
    return x;
}

std::optional<Matrix<Rational>> solve_right(const Matrix<Rational>& a, const Matrix<Rational>& b) {
    // X A = B  <=>  A^T X^T = B^T
    const std::size_t n = a.rows();
    if (a.cols() != n || b.cols() != n) throw std::invalid_argument("solve_right: dimension mismatch");
    Matrix<Rational> at(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) at(r, c) = a(c, r);
    Matrix<Rational> x(b.rows(), n);
    for (std::size_t i = 0; i < b.rows(); ++i) {
        std::vector<Rational> rhs(b.row(i).begin(), b.row(i).end());
        auto sol = solve_unique(at, rhs);
        if (!sol) return std::nullopt;
        for (std::size_t c = 0; c < n; ++c) x(i, c) = (*sol)[c];
    }
    return x;
}

}  // namespace isoplex::exact
