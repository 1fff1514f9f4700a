#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isoplex/matrix.hpp"

namespace isoplex {

using Integer = mpz_class;
using Rational = mpq_class;

/// Prints `num/den`, or just `num` when the denominator is one.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Parses `num`, `-num` or `num/den`; throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Exact dyadic value of a finite binary64.
Rational from_double(double x);

double to_double(const Rational& q);

int sign(const Rational& q);
int sign(const Integer& z);

/// Least common multiple of the denominators.
Integer common_denominator(std::span<const Rational> values);

/// Positive multiple of `values` with integer entries and gcd one (all zero stays zero).
std::vector<Integer> primitive_integer_vector(std::span<const Rational> values);

Matrix<double> to_double(const Matrix<Rational>& m);

}  // namespace isoplex
