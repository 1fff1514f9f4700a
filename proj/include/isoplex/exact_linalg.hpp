#pragma once

#include <optional>
#include <span>
#include <vector>

#include "isoplex/matrix.hpp"
#include "isoplex/rational.hpp"

namespace isoplex::exact {

std::size_t rank(Matrix<Rational> a);

Rational determinant(Matrix<Rational> a);

/// Unique solution of A x = b, or nullopt if A lacks full column rank or the system is inconsistent.
std::optional<std::vector<Rational>> solve_unique(Matrix<Rational> a, std::span<const Rational> b);

/// Solves X A = B for X (A square, invertible); nullopt when A is singular.
std::optional<Matrix<Rational>> solve_right(const Matrix<Rational>& a, const Matrix<Rational>& b);

}  // namespace isoplex::exact
