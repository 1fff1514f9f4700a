#pragma once

#include <vector>

#include "isoplex/matrix.hpp"
#include "isoplex/rational.hpp"

namespace isoplex::testing {

struct LpVerdict {
    bool inside = false;
    /// Convex weights over the rows with sum_i w_i a_i = 0 (inside only).
    std::vector<Rational> weights;
};

/**
 * Exact decision of 0 in conv(rows of a) by enumerating basic feasible solutions of
 * {w >= 0, sum w = 1, A^T w = 0}: each has a support of at most dim + 1 rows whose columns in
 * [A^T; 1] are independent. Throws std::invalid_argument beyond 12 rows or 8 columns.
 */
LpVerdict lp_oracle(const Matrix<Rational>& a);
LpVerdict lp_oracle(const Matrix<double>& a);

}  // namespace isoplex::testing
