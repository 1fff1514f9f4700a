#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "isoplex/bernstein.hpp"
#include "isoplex/dense_poly.hpp"
#include "isoplex/matrix.hpp"
#include "isoplex/multi_index.hpp"
#include "isoplex/rational.hpp"

namespace isoplex {

/**
 * Sparse homogeneous polynomial with exact rational coefficients and a binary64 mirror.
 *
 * Invariants: every exponent vector has total degree `degree()`, no stored coefficient is zero,
 * and `float_terms()` holds the rounding of each exact coefficient.
 */
class HomogeneousPoly {
public:
    HomogeneousPoly() = default;
    /// Throws std::invalid_argument on a wrong-length or wrong-degree exponent vector.
    HomogeneousPoly(int nvars, int degree, const std::map<MultiIndex, Rational>& terms);

    static HomogeneousPoly zero(int nvars, int degree) { return HomogeneousPoly(nvars, degree, {}); }

    int nvars() const { return nvars_; }
    int degree() const { return degree_; }
    bool is_zero() const { return terms_.empty(); }

    const std::map<MultiIndex, Rational>& terms() const { return terms_; }
    const SparseTerms<Rational>& exact_terms() const { return exact_list_; }
    const SparseTerms<double>& float_terms() const { return float_list_; }
    /// Coefficients multiplied by the positive lcm of their denominators.
    const SparseTerms<Integer>& integer_terms() const { return integer_list_; }

    Rational eval(std::span<const Rational> x) const;
    double eval(std::span<const double> x) const;

    /// Partial derivatives in variable order; each has degree - 1 (degree 0 input gives zeros).
    std::vector<HomogeneousPoly> gradient() const;

    /// q(y) = p(M y) with M of shape nvars x k.
    HomogeneousPoly substitute_linear(const Matrix<Rational>& m) const;

    /// Sum of absolute values of the exact coefficients, as a double.
    double coefficient_l1() const;

    /// Readable form in the input syntax, e.g. `1 * x0^2 - 3/2 * x0 x1`.
    std::string to_string() const;

    friend bool operator==(const HomogeneousPoly& a, const HomogeneousPoly& b) {
        return a.nvars_ == b.nvars_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }

private:
    int nvars_ = 0;
    int degree_ = 0;
    std::map<MultiIndex, Rational> terms_;
    SparseTerms<Rational> exact_list_;
    SparseTerms<double> float_list_;
    SparseTerms<Integer> integer_list_;
};

HomogeneousPoly from_dense(const DensePoly<Rational>& p);
DensePoly<Rational> to_dense(const HomogeneousPoly& p);

/// A system p = (p_1, ..., p_m) in a common set of nvars variables with 1 <= m <= nvars - 1.
class PolySystem {
public:
    PolySystem() = default;
    explicit PolySystem(std::vector<HomogeneousPoly> polys);

    int nvars() const { return nvars_; }
    int size() const { return static_cast<int>(polys_.size()); }
    const HomogeneousPoly& operator[](std::size_t i) const { return polys_[i]; }
    const std::vector<HomogeneousPoly>& polys() const { return polys_; }
    std::vector<int> degrees() const;
    int max_degree() const;

    /// gradients()[i][j] = d p_i / d x_j.
    const std::vector<std::vector<HomogeneousPoly>>& gradients() const { return gradients_; }

private:
    int nvars_ = 0;
    std::vector<HomogeneousPoly> polys_;
    std::vector<std::vector<HomogeneousPoly>> gradients_;
};

/**
 * Bernstein coefficients of x -> grad p(M x) over the simplex spanned by M's columns, gradients
 * taken in the ambient coordinates. rows[i][j] is the scalar form of d p_i / d x_j; polynomials
 * of different degrees keep their own degree.
 */
template <typename T>
struct JacobianForm {
    int m = 0;
    int ambient = 0;
    std::vector<std::vector<BernsteinForm<T>>> rows;

    /// Coefficient row vectors of polynomial i, one per multi-index.
    std::vector<std::vector<T>> coefficient_rows(std::size_t i) const {
        const auto& comps = rows[i];
        std::vector<std::vector<T>> out(comps.front().coeffs.size(), std::vector<T>(comps.size()));
        for (std::size_t j = 0; j < comps.size(); ++j)
            for (std::size_t r = 0; r < comps[j].coeffs.size(); ++r) out[r][j] = comps[j].coeffs[r];
        return out;
    }

    /// m x ambient matrix at multi-index rank r; requires all polynomials to share a degree.
    Matrix<T> matrix_at(std::size_t r) const {
        Matrix<T> out(static_cast<std::size_t>(m), static_cast<std::size_t>(ambient));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].front().degree != rows.front().front().degree)
                throw std::logic_error("matrix_at: polynomials have different degrees");
            for (std::size_t j = 0; j < rows[i].size(); ++j) out(i, j) = rows[i][j].coeffs[r];
        }
        return out;
    }
};

JacobianForm<Rational> gradient_bernstein(const PolySystem& ps, const Matrix<Rational>& m);
JacobianForm<double> gradient_bernstein(const PolySystem& ps, const Matrix<double>& m);

}  // namespace isoplex
