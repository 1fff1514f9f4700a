#include "isoplex/minnorm.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace isoplex {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Separated: return "separated";
        case Verdict::Inside: return "inside";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Weights mu (summing to one) of the min-norm point of the affine hull of the given rows.
VectorXd affine_min_norm(const MatrixXd& rows, const std::vector<int>& support) {
    const Index k = static_cast<Index>(support.size());
    MatrixXd kkt = MatrixXd::Zero(k + 1, k + 1);
    for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j <= i; ++j) {
            const double g = rows.row(support[static_cast<std::size_t>(i)]).dot(rows.row(support[static_cast<std::size_t>(j)]));
            kkt(i, j) = kkt(j, i) = g;
        }
        kkt(i, k) = kkt(k, i) = 1.0;
    }
    VectorXd rhs = VectorXd::Zero(k + 1);
    rhs(k) = 1.0;
    const VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    VectorXd mu = sol.head(k);
    const double s = mu.sum();
    if (std::isfinite(s) && std::abs(s) > 0) mu /= s;
    return mu;
}

}  // namespace

SeparationResult separate(const Matrix<double>& a, const SeparateOptions& opts) {
    if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("separate: empty generator set");
    for (double x : a.data())
        if (!std::isfinite(x)) throw std::invalid_argument("separate: non-finite generator entry");

    const Index count = static_cast<Index>(a.rows());
    const Index dim = static_cast<Index>(a.cols());
    MatrixXd rows(count, dim);
    for (Index r = 0; r < count; ++r)
        for (Index c = 0; c < dim; ++c) rows(r, c) = a(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    const VectorXd norms = rows.rowwise().norm();
    const int cap = opts.max_iterations > 0 ? opts.max_iterations : static_cast<int>(10 * count * dim);
    const double tol_sq = opts.tol * opts.tol;

    SeparationResult res;
    VectorXd w = VectorXd::Zero(count);
    std::vector<int> support;
    Index start = 0;
    norms.minCoeff(&start);
    support.push_back(static_cast<int>(start));
    w(start) = 1.0;
    VectorXd n = rows.row(start).transpose();
    std::vector<char> blocked(static_cast<std::size_t>(count), 0);

    auto finish = [&](Verdict v) {
        res.verdict = v;
        res.min_norm_sq = n.squaredNorm();
        res.weights.assign(w.data(), w.data() + count);
        if (v == Verdict::Separated) {
            const VectorXd u = n / n.norm();
            res.witness.assign(u.data(), u.data() + dim);
        }
        return res;
    };

    double last_sq = n.squaredNorm();
    for (;;) {
        const double nn = n.squaredNorm();
        if (opts.trace) opts.trace->push_back(nn);
        if (nn < tol_sq) return finish(Verdict::Inside);
        if (res.iterations >= cap) return finish(Verdict::Inconclusive);
        ++res.iterations;

        const double n_norm = std::sqrt(nn);
        Index pick = -1;
        double pick_score = 0;
        bool pick_blocked = true;
        for (Index r = 0; r < count; ++r) {
            const double dot = n.dot(rows.row(r));
            if (dot > opts.margin * n_norm * norms(r)) continue;
            const double score = norms(r) > 0 ? dot / norms(r) : -n_norm;
            const bool is_blocked = blocked[static_cast<std::size_t>(r)] != 0;
            // prefer unblocked candidates, then the most violating one
            if (pick < 0 || (pick_blocked && !is_blocked) || (pick_blocked == is_blocked && score < pick_score)) {
                pick = r;
                pick_score = score;
                pick_blocked = is_blocked;
            }
        }
        if (pick < 0) return finish(Verdict::Separated);
        if (std::find(support.begin(), support.end(), static_cast<int>(pick)) != support.end())
            return finish(Verdict::Inconclusive);  // stalled at float resolution

        // descent toward the violating generator
        const VectorXd v = rows.row(pick).transpose();
        const double nv = n.dot(v);
        const double denom = nn - 2 * nv + v.squaredNorm();
        if (!(denom > 0)) return finish(Verdict::Inconclusive);
        const double t = std::clamp((nn - nv) / denom, 0.0, 1.0);
        if (t <= 0) return finish(Verdict::Inconclusive);
        w *= (1 - t);
        w(pick) += t;
        support.push_back(static_cast<int>(pick));
        std::fill(blocked.begin(), blocked.end(), 0);

        // support reduction: move toward the affine min-norm point until a weight vanishes
        for (int guard = 0; guard <= static_cast<int>(count); ++guard) {
            const VectorXd mu = affine_min_norm(rows, support);
            if (!mu.allFinite()) break;
            double theta = 1.0;
            for (std::size_t i = 0; i < support.size(); ++i) {
                const double wi = w(support[i]);
                const double mi = mu(static_cast<Index>(i));
                if (mi < 0) theta = std::min(theta, wi / (wi - mi));
            }
            for (std::size_t i = 0; i < support.size(); ++i) {
                const Index s = support[i];
                w(s) += theta * (mu(static_cast<Index>(i)) - w(s));
            }
            if (theta >= 1.0) break;
            std::vector<int> kept;
            for (int s : support) {
                if (w(s) <= 1e-15) {
                    w(s) = 0;
                    blocked[static_cast<std::size_t>(s)] = 1;
                } else {
                    kept.push_back(s);
                }
            }
            if (kept.empty()) {
                kept.push_back(static_cast<int>(pick));
                w(pick) = 1.0;
            }
            support = std::move(kept);
        }
        const double total = w.sum();
        if (total > 0) w /= total;
        n = rows.transpose() * w;

        const double now_sq = n.squaredNorm();
        // exact arithmetic never increases the norm; a visible increase means the float
        // geometry has degenerated, so give up rather than cycle
        if (now_sq > last_sq * (1 + 1e-9) + 1e-300) return finish(Verdict::Inconclusive);
        last_sq = now_sq;
    }
}

std::string sign_string(const SignVector& s) {
    std::string out;
    for (int x : s) out += x > 0 ? '+' : '-';
    return out;
}

SignVector parse_sign_string(const std::string& s) {
    SignVector out;
    for (char c : s) {
        if (c == '+') out.push_back(1);
        else if (c == '-') out.push_back(-1);
        else throw std::invalid_argument("bad sign character '" + std::string(1, c) + "'");
    }
    return out;
}

RankResult strongly_full_rank_rows(const std::vector<Matrix<double>>& rows_by_poly, const SeparateOptions& opts) {
    if (rows_by_poly.empty()) throw std::invalid_argument("strongly_full_rank: no polynomials");
    const std::size_t m = rows_by_poly.size();
    const std::size_t dim = rows_by_poly.front().cols();
    std::size_t total = 0;
    for (const auto& r : rows_by_poly) {
        if (r.cols() != dim) throw std::invalid_argument("strongly_full_rank: inconsistent row length");
        total += r.rows();
    }
    RankResult out;
    out.ok = true;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (m - 1)); ++bits) {
        SignVector sigma(m, 1);
        for (std::size_t i = 1; i < m; ++i) sigma[i] = (bits >> (i - 1)) & 1 ? -1 : 1;
        Matrix<double> stacked(total, dim);
        std::size_t row = 0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t r = 0; r < rows_by_poly[i].rows(); ++r, ++row)
                for (std::size_t c = 0; c < dim; ++c) stacked(row, c) = sigma[i] * rows_by_poly[i](r, c);
        SeparationResult res = separate(stacked, opts);
        const bool good = res.verdict == Verdict::Separated;
        out.orbits.emplace_back(std::move(sigma), std::move(res));
        if (!good) {
            out.ok = false;
            break;
        }
    }
    return out;
}

RankResult strongly_full_rank(const std::vector<Matrix<double>>& ms, const SeparateOptions& opts) {
    if (ms.empty()) throw std::invalid_argument("strongly_full_rank: empty matrix family");
    const std::size_t m = ms.front().rows();
    const std::size_t dim = ms.front().cols();
    std::vector<Matrix<double>> rows(m, Matrix<double>(ms.size(), dim));
    for (std::size_t k = 0; k < ms.size(); ++k) {
        if (ms[k].rows() != m || ms[k].cols() != dim) throw std::invalid_argument("strongly_full_rank: non-uniform shapes");
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c < dim; ++c) rows[i](k, c) = ms[k](i, c);
    }
    return strongly_full_rank_rows(rows, opts);
}

}  // namespace isoplex
