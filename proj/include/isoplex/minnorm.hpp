#pragma once

#include <string>
#include <vector>

#include "isoplex/matrix.hpp"

namespace isoplex {

enum class Verdict { Separated, Inside, Inconclusive };

const char* to_string(Verdict v);

struct SeparationResult {
    Verdict verdict = Verdict::Inconclusive;
    /// Unit vector N with N . v > 0 for every generator (Separated only).
    std::vector<double> witness;
    /// Convex weights over the generators of the last iterate (Inside: they reconstruct a near-zero vector).
    std::vector<double> weights;
    double min_norm_sq = 0;
    int iterations = 0;
};

struct SeparateOptions {
    /// Inside is reported once the iterate's norm drops below tol.
    double tol = 0x1p-30;
    /// A generator v counts as separated only when N . v > margin * |N| * |v|.
    double margin = 1e-9;
    /// 0 selects 10 * |A| * dim.
    int max_iterations = 0;
    /// Receives |N|^2 after every step when non-null.
    std::vector<double>* trace = nullptr;
};

/**
 * Min-norm point of the convex hull of the rows of `a`, searched Wolfe-style: descent steps
 * (N + t v) / (1 + t) toward a violating generator alternate with affine min-norm solves over the
 * active support that drop generators whose weight reaches zero. A generator dropped by the last
 * support reduction is not picked for the next descent while another candidate exists.
 *
 * Throws std::invalid_argument on an empty or non-finite input.
 */
SeparationResult separate(const Matrix<double>& a, const SeparateOptions& opts = {});

/// Entry i is the sign applied to the rows of polynomial i.
using SignVector = std::vector<int>;

std::string sign_string(const SignVector& s);
SignVector parse_sign_string(const std::string& s);

struct RankResult {
    bool ok = false;
    /// One result per computed orbit representative (sigma_0 = +1); -sigma is separated by -N.
    std::vector<std::pair<SignVector, SeparationResult>> orbits;
};

/**
 * Strongly-full-rank test: for every sign vector sigma, 0 must lie outside the hull of the signed
 * rows {sigma_i r : r a row contributed by polynomial i}. `rows_by_poly[i]` holds the rows of
 * polynomial i as the rows of a matrix; all must share their column count.
 * Stops at the first non-separated orbit.
 */
RankResult strongly_full_rank_rows(const std::vector<Matrix<double>>& rows_by_poly, const SeparateOptions& opts = {});

/// Same test for a family of m x (n+1) matrices (row i of each matrix belongs to polynomial i).
RankResult strongly_full_rank(const std::vector<Matrix<double>>& ms, const SeparateOptions& opts = {});

}  // namespace isoplex
