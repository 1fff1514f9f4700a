#include <doctest.h>

#include <cmath>
#include <random>

#include "isoplex/bernstein.hpp"
#include "isoplex/dense_poly.hpp"
#include "isoplex/parse.hpp"
#include "isoplex/poly.hpp"
#include "support/helpers.hpp"
#include "support/lp_oracle.hpp"

using namespace isoplex;
using isoplex::testing::random_poly;
using isoplex::testing::random_rational;
using isoplex::testing::random_rational_matrix;
using isoplex::testing::random_rational_vector;

namespace {

HomogeneousPoly parse_one(const std::string& text) { return parse_system(text)[0]; }

Rational eval(const HomogeneousPoly& p, const std::vector<Rational>& x) { return p.eval(std::span<const Rational>(x)); }

std::vector<Rational> mat_vec(const Matrix<Rational>& m, const std::vector<Rational>& x) {
    std::vector<Rational> out(m.rows(), Rational(0));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out[r] += m(r, c) * x[c];
    return out;
}

DensePoly<Rational> dense_of(const HomogeneousPoly& p) {
    DensePoly<Rational> d(p.nvars(), p.degree());
    for (const auto& [alpha, c] : p.terms()) d.coeffs[multi_index_rank(alpha)] = c;
    return d;
}

/// Uniform-ish random barycentric point with rational weights.
std::vector<Rational> random_barycentric(std::mt19937_64& rng, std::size_t k) {
    std::uniform_int_distribution<int> w(0, 30);
    std::vector<Rational> l(k);
    Rational total = 0;
    for (auto& x : l) {
        x = w(rng);
        total += x;
    }
    if (total == 0) {
        l[0] = 1;
        total = 1;
    }
    for (auto& x : l) {
        x /= total;
        x.canonicalize();
    }
    return l;
}

}  // namespace

TEST_CASE("eval on the conic vanishes at (1, 0, 1)") {
    CHECK(eval(parse_one("x0^2 + x1^2 - x2^2"), {1, 0, 1}) == 0);
}

TEST_CASE("eval of a monomial") { CHECK(eval(parse_one("nvars 2\nx0^2"), {3, 5}) == 9); }

TEST_CASE("eval of the quartic family at (1, 1, 0)") {
    const auto p = isoplex::testing::load("p_eps_0.5.poly")[0];
    const Rational x = 1, y = 1, t = 0, eps(1, 2);
    const Rational direct = (x * x + y * y - t * t) * (x * x + y * y - t * t) + eps * x * y * (x - y) * (x + y);
    CHECK(eval(p, {x, y, t}) == direct);
    CHECK(direct == 4);
}

TEST_CASE("eval rejects a dimension mismatch") {
    const auto p = parse_one("x0^2 + x1^2 - x2^2");
    CHECK_THROWS_AS(eval(p, {1, 2}), std::invalid_argument);
}

TEST_CASE("homogeneity under positive rational scaling") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_poly(rng, 3, 1 + trial % 5);
        const auto x = random_rational_vector(rng, 3);
        Rational lambda = abs(random_rational(rng)) + Rational(1, 7);
        std::vector<Rational> lx = x;
        for (auto& v : lx) v *= lambda;
        Rational scale = 1;
        for (int i = 0; i < p.degree(); ++i) scale *= lambda;
        CHECK(eval(p, lx) == scale * eval(p, x));
    }
}

TEST_CASE("parser handles rationals, comments and an nvars directive") {
    const auto ps = parse_system("# a comment\nnvars 4\n3/2 * x0^2 - x1 x2 # trailing\n");
    REQUIRE(ps.size() == 1);
    CHECK(ps.nvars() == 4);
    CHECK(eval(ps[0], {2, 1, 3, 7}) == Rational(3));
    CHECK(parse_system(format_system(ps))[0] == ps[0]);
}

TEST_CASE("parser rejects non-homogeneous input and lists the offending monomials") {
    try {
        parse_system("x0^2 + x1^2 + x2");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("x2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_system("x0^2 + * x1"), ParseError);
    CHECK_THROWS_AS(parse_system("x0 - x0"), ParseError);
}

TEST_CASE("float mirror is the rounding of the exact coefficients") {
    std::mt19937_64 rng(3);
    const auto p = random_poly(rng, 3, 4);
    REQUIRE(p.float_terms().size() == p.exact_terms().size());
    for (std::size_t i = 0; i < p.exact_terms().size(); ++i) {
        const double exact = to_double(p.exact_terms()[i].second);
        CHECK(p.float_terms()[i].second == exact);
    }
}

TEST_CASE("gradient of simple monomials") {
    const auto sq = parse_system("nvars 2\nx0^2")[0].gradient();
    REQUIRE(sq.size() == 2);
    CHECK(sq[0] == parse_system("nvars 2\n2 * x0")[0]);
    CHECK(sq[1].is_zero());

    const auto xyt = parse_one("x0 x1 x2").gradient();
    CHECK(xyt[0] == parse_one("x1 x2"));
    CHECK(xyt[1] == parse_one("x0 x2"));
    CHECK(xyt[2] == parse_one("nvars 3\nx0 x1"));
}

TEST_CASE("Euler relation x . grad p(x) = d p(x)") {
    std::mt19937_64 rng(5);
    const auto p = random_poly(rng, 3, 4);
    const auto g = p.gradient();
    for (int i = 0; i < 10; ++i) {
        const auto x = random_rational_vector(rng, 3);
        Rational lhs = 0;
        for (std::size_t j = 0; j < 3; ++j) lhs += x[j] * eval(g[j], x);
        CHECK(lhs == p.degree() * eval(p, x));
    }
}

TEST_CASE("substitute_linear with the identity returns p") {
    std::mt19937_64 rng(6);
    const auto p = random_poly(rng, 3, 3);
    CHECK(p.substitute_linear(Matrix<Rational>::identity(3)) == p);
}

TEST_CASE("substitute_linear expands x^2 - y^2 on (u + v, u - v) to 4uv") {
    const auto p = parse_system("nvars 2\nx0^2 - x1^2")[0];
    Matrix<Rational> m(2, 2);
    m(0, 0) = 1;
    m(0, 1) = 1;
    m(1, 0) = 1;
    m(1, 1) = -1;
    CHECK(p.substitute_linear(m) == parse_system("nvars 2\n4 * x0 x1")[0]);
}

TEST_CASE("substitute_linear agrees with point evaluation") {
    std::mt19937_64 rng(7);
    const auto p = random_poly(rng, 3, 3);
    const auto m = random_rational_matrix(rng, 3, 3);
    const auto q = p.substitute_linear(m);
    for (int i = 0; i < 20; ++i) {
        const auto x = random_rational_vector(rng, 3);
        CHECK(eval(q, x) == eval(p, mat_vec(m, x)));
    }
}

TEST_CASE("to_bernstein of x^2 on the basis (x^2, 2xy, y^2)") {
    const auto b = to_bernstein(dense_of(parse_system("nvars 2\nx0^2")[0]));
    CHECK(b.coeffs[multi_index_rank(MultiIndex{2, 0})] == 1);
    CHECK(b.coeffs[multi_index_rank(MultiIndex{1, 1})] == 0);
    CHECK(b.coeffs[multi_index_rank(MultiIndex{0, 2})] == 0);
}

TEST_CASE("to_bernstein of (x + y)^2 is all ones") {
    const auto b = to_bernstein(dense_of(parse_system("nvars 2\nx0^2 + 2 * x0 x1 + x1^2")[0]));
    for (const auto& c : b.coeffs) CHECK(c == 1);
}

TEST_CASE("Bernstein round trip is exact") {
    std::mt19937_64 rng(8);
    for (int d = 1; d <= 6; ++d) {
        const auto p = dense_of(random_poly(rng, 4, d));
        CHECK(from_bernstein(to_bernstein(p)).coeffs == p.coeffs);
    }
}

TEST_CASE("de Casteljau reproduces evaluation of a degree-5 binary form") {
    std::mt19937_64 rng(9);
    const auto p = random_poly(rng, 2, 5);
    const auto b = to_bernstein(dense_of(p));
    for (int i = 0; i < 10; ++i) {
        const auto l = random_barycentric(rng, 2);
        CHECK(de_casteljau(b, std::span<const Rational>(l)) == eval(p, l));
    }
}

TEST_CASE("de Casteljau at a vertex returns the corner coefficient; constants stay constant") {
    std::mt19937_64 rng(10);
    const auto b = to_bernstein(dense_of(random_poly(rng, 3, 4)));
    for (int i = 0; i < 3; ++i) {
        std::vector<Rational> e(3, Rational(0));
        e[static_cast<std::size_t>(i)] = 1;
        CHECK(de_casteljau(b, std::span<const Rational>(e)) == b.coeffs[index_table(3, 4).vertex_rank(i)]);
    }
    BernsteinForm<Rational> c{3, 3, std::vector<Rational>(multi_index_count(3, 3), Rational(5, 3))};
    const auto l = random_barycentric(rng, 3);
    CHECK(de_casteljau(c, std::span<const Rational>(l)) == Rational(5, 3));
    const std::vector<Rational> outside{Rational(3, 2), Rational(-1, 2), 0};
    CHECK_THROWS_AS(de_casteljau(c, std::span<const Rational>(outside)), std::domain_error);
}

TEST_CASE("hull enclosure: values over a face lie within the Bernstein coefficient range") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = random_poly(rng, 3, 4);
        const auto m = random_rational_matrix(rng, 3, 3);
        const auto b = to_bernstein(dense_of(p.substitute_linear(m)));
        const auto [lo, hi] = std::minmax_element(b.coeffs.begin(), b.coeffs.end());
        for (int i = 0; i < 100; ++i) {
            const auto l = random_barycentric(rng, 3);
            const Rational v = eval(p, mat_vec(m, l));
            CHECK(*lo <= v);
            CHECK(v <= *hi);
        }
    }
}

TEST_CASE("float evaluation stays within 2^-40 of the exact value") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_poly(rng, 3, 1 + trial % 6);
        std::vector<double> x(3);
        std::vector<Rational> xr(3);
        double inf = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            x[i] = u(rng);
            xr[i] = from_double(x[i]);
            inf = std::max(inf, std::abs(x[i]));
        }
        const double exact = to_double(eval(p, xr));
        const double approx = p.eval(std::span<const double>(x));
        CHECK(std::abs(approx - exact) <= std::ldexp(1.0, -40) * p.coefficient_l1() * std::pow(inf, p.degree()));
    }
}

TEST_CASE("gradient_bernstein of a linear form is constant") {
    const PolySystem ps({parse_one("2 * x0 - x1 + 3 * x2")});
    std::mt19937_64 rng(14);
    const auto j = gradient_bernstein(ps, random_rational_matrix(rng, 3, 3));
    const auto rows = j.coefficient_rows(0);
    for (const auto& r : rows) CHECK(r == std::vector<Rational>{2, -1, 3});
}

TEST_CASE("gradient_bernstein of x^2 at the identity chart") {
    const PolySystem ps({parse_system("nvars 2\nx0^2")[0]});
    const auto rows = gradient_bernstein(ps, Matrix<Rational>::identity(2)).coefficient_rows(0);
    REQUIRE(rows.size() == 2);
    CHECK(rows[multi_index_rank(MultiIndex{1, 0})] == std::vector<Rational>{2, 0});
    CHECK(rows[multi_index_rank(MultiIndex{0, 1})] == std::vector<Rational>{0, 0});
}

TEST_CASE("gradient hull property via the LP oracle") {
    std::mt19937_64 rng(15);
    const auto p = random_poly(rng, 3, 3);
    const PolySystem ps({p});
    const auto m = random_rational_matrix(rng, 3, 3);
    const auto rows = gradient_bernstein(ps, m).coefficient_rows(0);
    REQUIRE(rows.size() <= 12);
    const auto grad = p.gradient();
    for (int i = 0; i < 50; ++i) {
        const auto x = mat_vec(m, random_barycentric(rng, 3));
        // grad p(x) in conv(rows) iff 0 in conv(rows - grad p(x))
        Matrix<Rational> shifted(rows.size(), 3);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t j = 0; j < 3; ++j) shifted(r, j) = rows[r][j] - eval(grad[j], x);
        CHECK(isoplex::testing::lp_oracle(shifted).inside);
    }
}

TEST_CASE("float and exact Bernstein conversion agree to 2^-40 relative") {
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_poly(rng, 3, 1 + trial % 6);
        const auto exact = to_bernstein(dense_of(p));
        DensePoly<double> f(p.nvars(), p.degree());
        for (const auto& [alpha, c] : p.float_terms()) f.coeffs[multi_index_rank(alpha)] = c;
        const auto fb = to_bernstein(f);
        for (std::size_t r = 0; r < fb.coeffs.size(); ++r)
            CHECK(std::abs(fb.coeffs[r] - to_double(exact.coeffs[r])) <= std::ldexp(1.0, -40) * p.coefficient_l1());
    }
}

TEST_CASE("multi-index ranking is a bijection onto [0, count)") {
    for (int n = 1; n <= 5; ++n)
        for (int d = 0; d <= 6; ++d) {
            const auto& t = index_table(n, d);
            REQUIRE(t.size() == multi_index_count(n, d));
            for (std::size_t r = 0; r < t.size(); ++r) CHECK(multi_index_rank(t[r]) == r);
        }
}

TEST_CASE("polynomial systems enforce 1 <= m <= nvars - 1") {
    CHECK_THROWS_AS(PolySystem({parse_system("nvars 2\nx0")[0], parse_system("nvars 2\nx1")[0]}), std::invalid_argument);
    CHECK_THROWS_AS(PolySystem({parse_system("nvars 2\nx0")[0], parse_system("nvars 3\nx1")[0]}), std::invalid_argument);
}
