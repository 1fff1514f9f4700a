#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "isoplex/minnorm.hpp"
#include "support/lp_oracle.hpp"

using namespace isoplex;
using isoplex::testing::lp_oracle;

namespace {

Matrix<double> rows(std::initializer_list<std::initializer_list<double>> xs) {
    const std::size_t cols = xs.begin()->size();
    Matrix<double> m(xs.size(), cols);
    std::size_t r = 0;
    for (const auto& row : xs) {
        std::size_t c = 0;
        for (double x : row) m(r, c++) = x;
        ++r;
    }
    return m;
}

bool witness_separates(const Matrix<double>& a, const std::vector<double>& n) {
    if (n.size() != a.cols()) return false;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        double dot = 0;
        for (std::size_t c = 0; c < a.cols(); ++c) dot += n[c] * a(r, c);
        if (!(dot > 0)) return false;
    }
    return true;
}

std::vector<double> combine(const Matrix<double>& a, const std::vector<double>& w) {
    std::vector<double> out(a.cols(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out[c] += w[r] * a(r, c);
    return out;
}

double norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("single generator is separated by itself") {
    const auto res = separate(rows({{1, 0}}));
    REQUIRE(res.verdict == Verdict::Separated);
    CHECK(res.witness[0] == doctest::Approx(1.0));
    CHECK(res.witness[1] == doctest::Approx(0.0));
}

TEST_CASE("symmetric pair contains the origin with equal weights") {
    const auto res = separate(rows({{1, 0}, {-1, 0}}));
    REQUIRE(res.verdict == Verdict::Inside);
    REQUIRE(res.weights.size() == 2);
    CHECK(res.weights[0] == doctest::Approx(0.5));
    CHECK(res.weights[1] == doctest::Approx(0.5));
}

TEST_CASE("min-norm point of {(1,1),(1,-1),(2,0)} is (1,0)") {
    const auto a = rows({{1, 1}, {1, -1}, {2, 0}});
    // brute-force QP over a grid of convex weights
    const int steps = 400;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_point;
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; i + j <= steps; ++j) {
            const std::vector<double> w{double(i) / steps, double(j) / steps, double(steps - i - j) / steps};
            const auto p = combine(a, w);
            if (norm(p) < best) {
                best = norm(p);
                best_point = p;
            }
        }
    CHECK(best_point[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(best_point[1] == doctest::Approx(0.0));

    const auto res = separate(a);
    REQUIRE(res.verdict == Verdict::Separated);
    CHECK(witness_separates(a, res.witness));
    CHECK(std::sqrt(res.min_norm_sq) == doctest::Approx(best).epsilon(1e-6));
    CHECK_FALSE(lp_oracle(a).inside);
}

TEST_CASE("lp oracle agrees on the small examples") {
    CHECK_FALSE(lp_oracle(rows({{1, 0}})).inside);
    CHECK(lp_oracle(rows({{1, 0}, {-1, 0}})).inside);
    CHECK(lp_oracle(rows({{0, 0, 0}})).inside);
    CHECK(separate(rows({{0, 0, 0}})).verdict == Verdict::Inside);
    CHECK_THROWS_AS(lp_oracle(Matrix<double>(13, 2, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(lp_oracle(Matrix<double>(3, 9, 1.0)), std::invalid_argument);
}

TEST_CASE("separate rejects empty and non-finite input") {
    CHECK_THROWS_AS(separate(Matrix<double>()), std::invalid_argument);
    CHECK_THROWS_AS(separate(rows({{1, std::numeric_limits<double>::quiet_NaN()}})), std::invalid_argument);
    CHECK_THROWS_AS(separate(rows({{1, 0}, {std::numeric_limits<double>::infinity(), 1}})), std::invalid_argument);
}

TEST_CASE("random 6 x 3 sets agree with the exact lp oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> coord(-16, 16);
    int decided = 0, inside = 0;
    for (int t = 0; t < 500; ++t) {
        Matrix<double> a(6, 3);
        // bias toward one half-space so both verdicts occur
        const int shift = t % 3 == 0 ? 0 : 6;
        for (std::size_t r = 0; r < 6; ++r)
            for (std::size_t c = 0; c < 3; ++c) a(r, c) = (coord(rng) + (c == 0 ? shift : 0)) / 8.0;
        std::vector<double> trace;
        SeparateOptions opts;
        opts.trace = &trace;
        const auto res = separate(a, opts);
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] * (1 + 1e-12) + 1e-300);
        if (res.verdict == Verdict::Inconclusive) continue;
        ++decided;
        const auto exact = lp_oracle(a);
        CHECK_MESSAGE(exact.inside == (res.verdict == Verdict::Inside), "instance " << t);
        if (res.verdict == Verdict::Separated) {
            CHECK(witness_separates(a, res.witness));
        } else {
            ++inside;
            double total = 0;
            for (double w : res.weights) {
                CHECK(w >= 0);
                total += w;
            }
            CHECK(total == doctest::Approx(1.0));
            CHECK(norm(combine(a, res.weights)) < 2 * opts.tol);
        }
    }
    CHECK(decided >= 490);
    CHECK(inside > 50);
    CHECK(decided - inside > 50);
}

TEST_CASE("strongly full rank with m = 1 is plain separation") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int t = 0; t < 50; ++t) {
        Matrix<double> a(5, 3);
        for (std::size_t r = 0; r < 5; ++r)
            for (std::size_t c = 0; c < 3; ++c) a(r, c) = g(rng) + (c == 0 ? 1.0 : 0.0);
        const auto plain = separate(a);
        const auto rank = strongly_full_rank_rows({a});
        REQUIRE(rank.orbits.size() == 1);
        CHECK(rank.orbits[0].first == SignVector{1});
        CHECK(rank.orbits[0].second.verdict == plain.verdict);
        CHECK(rank.ok == (plain.verdict == Verdict::Separated));
        if (rank.ok) CHECK(witness_separates(a, rank.orbits[0].second.witness));
    }
}

TEST_CASE("orthonormal rows are strongly full rank") {
    const auto res = strongly_full_rank({rows({{1, 0, 0}, {0, 1, 0}})});
    CHECK(res.ok);
    REQUIRE(res.orbits.size() == 2);
    for (const auto& [sigma, sep] : res.orbits) {
        REQUIRE(sep.verdict == Verdict::Separated);
        // the witness works for sigma, its negation for -sigma
        const auto signed_rows = rows({{double(sigma[0]), 0, 0}, {0, double(sigma[1]), 0}});
        CHECK(witness_separates(signed_rows, sep.witness));
        const auto mirror = rows({{-double(sigma[0]), 0, 0}, {0, -double(sigma[1]), 0}});
        std::vector<double> neg = sep.witness;
        for (double& x : neg) x = -x;
        CHECK(witness_separates(mirror, neg));
    }
}

TEST_CASE("a segment through a rank-deficient matrix fails for the predicted sign") {
    // v = (1, -1) annihilates [[1,0,0],[1,0,0]], so sigma = (+, -) puts 0 in the hull
    const std::vector<Matrix<double>> ms{rows({{1, 0, 0}, {0, 1, 0}}), rows({{1, 0, 0}, {1, 0, 0}})};
    const auto res = strongly_full_rank(ms);
    CHECK_FALSE(res.ok);
    REQUIRE(res.orbits.size() == 2);
    CHECK(sign_string(res.orbits[0].first) == "++");
    CHECK(res.orbits[0].second.verdict == Verdict::Separated);
    CHECK(sign_string(res.orbits[1].first) == "+-");
    CHECK(res.orbits[1].second.verdict != Verdict::Separated);
    const auto signed_rows = rows({{1, 0, 0}, {0, -1, 0}, {1, 0, 0}, {-1, 0, 0}});
    CHECK(lp_oracle(signed_rows).inside);
}

TEST_CASE("strongly full rank validates shapes") {
    CHECK_THROWS_AS(strongly_full_rank({}), std::invalid_argument);
    CHECK_THROWS_AS(strongly_full_rank_rows({rows({{1, 0}}), rows({{1, 0, 0}})}), std::invalid_argument);
}

TEST_CASE("sign strings round trip") {
    for (const std::string s : {"+", "-", "+-", "++-+"}) CHECK(sign_string(parse_sign_string(s)) == s);
    CHECK(parse_sign_string("+-") == SignVector{1, -1});
    CHECK_THROWS_AS(parse_sign_string("+x"), std::invalid_argument);
}
