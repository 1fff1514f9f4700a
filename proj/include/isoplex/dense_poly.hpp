#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "isoplex/matrix.hpp"
#include "isoplex/multi_index.hpp"

namespace isoplex {

/// Homogeneous polynomial with a dense coefficient array indexed by multi_index_rank.
template <typename T>
struct DensePoly {
    int nvars = 0;
    int degree = 0;
    std::vector<T> coeffs;

    DensePoly() = default;
    DensePoly(int nv, int deg) : nvars(nv), degree(deg), coeffs(multi_index_count(nv, deg), T(0)) {}

    const IndexTable& table() const { return index_table(nvars, degree); }
};

/// Rank of alpha + beta for every pair of ranks, flattened as [ia * |B| + ib].
const std::vector<std::size_t>& product_rank_table(int nvars, int deg_a, int deg_b);

template <typename T>
DensePoly<T> multiply(const DensePoly<T>& a, const DensePoly<T>& b) {
    if (a.nvars != b.nvars) throw std::invalid_argument("multiply: variable count mismatch");
    DensePoly<T> out(a.nvars, a.degree + b.degree);
    const auto& ranks = product_rank_table(a.nvars, a.degree, b.degree);
    const std::size_t nb = b.coeffs.size();
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (a.coeffs[i] == 0) continue;
        const std::size_t* row = ranks.data() + i * nb;
        for (std::size_t j = 0; j < nb; ++j) {
            if (b.coeffs[j] == 0) continue;
            out.coeffs[row[j]] += a.coeffs[i] * b.coeffs[j];
        }
    }
    return out;
}

/// Powers of the linear forms x_i(lambda) = sum_j M(i, j) lambda_j, i.e. the rows of a chart.
template <typename T>
class LinearPowers {
public:
    LinearPowers(const Matrix<T>& chart, int max_degree)
        : nvars_(static_cast<int>(chart.cols())), powers_(chart.rows()) {
        for (std::size_t i = 0; i < chart.rows(); ++i) {
            auto& p = powers_[i];
            p.reserve(static_cast<std::size_t>(max_degree) + 1);
            DensePoly<T> one(nvars_, 0);
            one.coeffs[0] = T(1);
            p.push_back(std::move(one));
            if (max_degree == 0) continue;
            DensePoly<T> lin(nvars_, 1);
            for (int j = 0; j < nvars_; ++j)
                lin.coeffs[multi_index_rank(unit_index(j))] = chart(i, static_cast<std::size_t>(j));
            for (int e = 1; e <= max_degree; ++e) p.push_back(e == 1 ? lin : multiply(p.back(), lin));
        }
    }

    int nvars() const { return nvars_; }
    const DensePoly<T>& power(std::size_t var, int e) const { return powers_[var][static_cast<std::size_t>(e)]; }

private:
    MultiIndex unit_index(int j) const {
        MultiIndex m(static_cast<std::size_t>(nvars_), 0);
        m[static_cast<std::size_t>(j)] = 1;
        return m;
    }

    int nvars_;
    std::vector<std::vector<DensePoly<T>>> powers_;
};

template <typename T>
using SparseTerms = std::vector<std::pair<MultiIndex, T>>;

/**
 * q(lambda) = p(M lambda) for p given as sparse terms of total degree `degree`.
 * Expands each monomial as a product of powers of the chart's linear forms.
 */
template <typename T>
DensePoly<T> substitute(const SparseTerms<T>& terms, int degree, const LinearPowers<T>& powers) {
    DensePoly<T> out(powers.nvars(), degree);
    for (const auto& [alpha, c] : terms) {
        const DensePoly<T>* first = nullptr;
        DensePoly<T> acc;
        for (std::size_t v = 0; v < alpha.size(); ++v) {
            if (alpha[v] == 0) continue;
            const auto& pw = powers.power(v, alpha[v]);
            if (!first && acc.coeffs.empty()) {
                first = &pw;
            } else {
                acc = multiply(first ? *first : acc, pw);
                first = nullptr;
            }
        }
        const DensePoly<T>& prod = first ? *first : (acc.coeffs.empty() ? powers.power(0, 0) : acc);
        for (std::size_t r = 0; r < prod.coeffs.size(); ++r)
            if (prod.coeffs[r] != 0) out.coeffs[r] += c * prod.coeffs[r];
    }
    return out;
}

}  // namespace isoplex
