#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "isoplex/dense_poly.hpp"
#include "isoplex/rational.hpp"

namespace isoplex {

/**
 * Coefficients b_alpha of a homogeneous polynomial in the basis (d!/alpha!) lambda^alpha over the
 * unit simplex, stored in multi_index_rank order. Values over the simplex are convex combinations
 * of the coefficients.
 */
template <typename T>
struct BernsteinForm {
    int nvars = 0;
    int degree = 0;
    std::vector<T> coeffs;

    const IndexTable& table() const { return index_table(nvars, degree); }
};

namespace detail {

template <typename T>
T exact_bernstein_factor(const MultiIndex& alpha, int degree) {
    Integer num = 1;
    for (int e : alpha) num *= Integer(std::to_string(factorial(e)));
    Rational q(num, Integer(std::to_string(factorial(degree))));
    q.canonicalize();
    return T(q);
}

}  // namespace detail

/// b_alpha = c_alpha * alpha! / d!.
template <typename T>
BernsteinForm<T> to_bernstein(const DensePoly<T>& p) {
    BernsteinForm<T> b{p.nvars, p.degree, p.coeffs};
    const auto& table = p.table();
    for (std::size_t r = 0; r < b.coeffs.size(); ++r) {
        if (b.coeffs[r] == 0) continue;
        if constexpr (std::is_floating_point_v<T>)
            b.coeffs[r] *= table.bernstein_factor(r);
        else
            b.coeffs[r] *= detail::exact_bernstein_factor<T>(table[r], p.degree);
    }
    return b;
}

template <typename T>
DensePoly<T> from_bernstein(const BernsteinForm<T>& b) {
    DensePoly<T> p(b.nvars, b.degree);
    const auto& table = b.table();
    for (std::size_t r = 0; r < b.coeffs.size(); ++r) {
        if (b.coeffs[r] == 0) continue;
        if constexpr (std::is_floating_point_v<T>)
            p.coeffs[r] = b.coeffs[r] / table.bernstein_factor(r);
        else
            p.coeffs[r] = b.coeffs[r] / detail::exact_bernstein_factor<T>(table[r], b.degree);
    }
    return p;
}

/// Bernstein coefficients scaled by d!, i.e. c_alpha * alpha!; integral whenever c is.
inline std::vector<Integer> scaled_bernstein(const DensePoly<Integer>& p) {
    std::vector<Integer> out(p.coeffs.size());
    const auto& table = p.table();
    for (std::size_t r = 0; r < out.size(); ++r) {
        if (p.coeffs[r] == 0) continue;
        Integer f = 1;
        for (int e : table[r]) f *= Integer(std::to_string(factorial(e)));
        out[r] = p.coeffs[r] * f;
    }
    return out;
}

/// Value at barycentric point `lambda` by repeated convex combination of the coefficients.
template <typename T>
T de_casteljau(const BernsteinForm<T>& b, std::span<const T> lambda) {
    if (lambda.size() != static_cast<std::size_t>(b.nvars))
        throw std::invalid_argument("de_casteljau: barycentric dimension mismatch");
    T total = 0;
    for (const auto& l : lambda) {
        if (l < 0) throw std::domain_error("de_casteljau: point outside the simplex");
        total += l;
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (std::abs(total - T(1)) > 1e-12) throw std::domain_error("de_casteljau: weights do not sum to one");
    } else {
        if (total != 1) throw std::domain_error("de_casteljau: weights do not sum to one");
    }

    std::vector<T> level = b.coeffs;
    MultiIndex up(static_cast<std::size_t>(b.nvars));
    for (int deg = b.degree - 1; deg >= 0; --deg) {
        const auto& lower = index_table(b.nvars, deg);
        std::vector<T> next(lower.size(), T(0));
        for (std::size_t r = 0; r < lower.size(); ++r) {
            for (int j = 0; j < b.nvars; ++j) {
                up = lower[r];
                ++up[static_cast<std::size_t>(j)];
                next[r] += lambda[static_cast<std::size_t>(j)] * level[multi_index_rank(up)];
            }
        }
        level = std::move(next);
    }
    return level[0];
}

}  // namespace isoplex
