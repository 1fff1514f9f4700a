#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace isoplex {

/// Exponent vector; entry i is the power of variable i.
using MultiIndex = std::vector<int>;

/// Number of multi-indices of total degree `degree` in `nvars` variables: C(degree + nvars - 1, nvars - 1).
std::size_t multi_index_count(int nvars, int degree);

/**
 * Colexicographic rank of a multi-index among those of the same length and total degree.
 *
 * Writing alpha in stars-and-bars form, bar j (1 <= j <= k, k = nvars - 1) sits at position
 * b_j = alpha_0 + ... + alpha_{j-1} + (j - 1), and the rank is sum_j C(b_j, j). This is the
 * combinatorial number system on k-subsets of {0, ..., degree + k - 1}, hence a bijection onto
 * [0, multi_index_count(nvars, degree)).
 */
std::size_t multi_index_rank(std::span<const int> alpha);

/// All multi-indices of one (nvars, degree) pair, stored in rank order, plus per-entry factorial data.
class IndexTable {
public:
    IndexTable(int nvars, int degree);

    int nvars() const { return nvars_; }
    int degree() const { return degree_; }
    std::size_t size() const { return entries_.size(); }

    const MultiIndex& operator[](std::size_t rank) const { return entries_[rank]; }
    const std::vector<MultiIndex>& entries() const { return entries_; }

    /// alpha! / degree!, the monomial-to-Bernstein factor.
    double bernstein_factor(std::size_t rank) const { return bernstein_factor_[rank]; }

    /// Rank of the vertex multi-index degree * e_i.
    std::size_t vertex_rank(int i) const { return vertex_rank_[static_cast<std::size_t>(i)]; }

private:
    int nvars_;
    int degree_;
    std::vector<MultiIndex> entries_;
    std::vector<double> bernstein_factor_;
    std::vector<std::size_t> vertex_rank_;
};

/// Shared, lazily built table; safe to call from several threads.
const IndexTable& index_table(int nvars, int degree);

/// n! as an unsigned 64-bit value (n <= 20).
std::uint64_t factorial(int n);

}  // namespace isoplex
