#include <doctest.h>

#include "isoplex/driver.hpp"
#include "isoplex/parse.hpp"
#include "support/helpers.hpp"

using namespace isoplex;

TEST_CASE("an empty variety needs no refinement") {
    const auto sol = solve(testing::load("empty.poly"));
    CHECK(sol.status == SolveStatus::Certified);
    CHECK(sol.stats.refinements == 0);
    CHECK(sol.dec.cone_count() == 8);
    CHECK(sol.failed.empty());
}

TEST_CASE("the conic certifies and every face carries a certificate") {
    const auto sol = solve(testing::load("conic.poly"));
    REQUIRE(sol.status == SolveStatus::Certified);
    CHECK(sol.certificates.size() == sol.dec.faces().size());
    for (const auto& [f, cof] : sol.dec.faces()) {
        REQUIRE(sol.certificates.count(f));
        CHECK(sol.certificates.at(f).face == f);
    }
    CHECK(sol.stats.faces_tested >= sol.dec.faces().size());
}

TEST_CASE("each refinement adds an antipodal vertex pair") {
    for (const char* name : {"conic.poly", "p_eps_0.5.poly", "circles_1.poly"}) {
        const auto ps = testing::load(name);
        const auto sol = solve(ps);
        REQUIRE(sol.status == SolveStatus::Certified);
        const std::size_t initial = 2 * static_cast<std::size_t>(ps.nvars());
        CHECK(sol.dec.vertex_count() == initial + 2 * static_cast<std::size_t>(sol.stats.refinements));
        CHECK(sol.tilde.size() == sol.dec.vertex_count());
    }
}

TEST_CASE("vertex values are the exact polynomial values") {
    const auto ps = testing::load("p_eps_0.5.poly");
    const auto sol = solve(ps);
    for (const auto& v : sol.dec.vertices()) CHECK(sol.tilde.values(v.id)[0] == ps[0].eval(std::span<const Rational>(v.ray)));
}

TEST_CASE("solving is deterministic, serial or parallel") {
    const auto ps = testing::load("p_eps_0.05.poly");
    SolveParams serial;
    SolveParams parallel;
    parallel.threads = 0;
    const auto a = solve(ps, serial);
    const auto b = solve(ps, serial);
    const auto c = solve(ps, parallel);
    CHECK(a.dec.dump() == b.dec.dump());
    CHECK(a.dec.dump() == c.dec.dump());
    CHECK(a.certificates == b.certificates);
    CHECK(a.certificates == c.certificates);
    CHECK(a.tilde == c.tilde);
    CHECK(a.stats.refinements == c.stats.refinements);
}

TEST_CASE("larger budgets only refine further") {
    const auto ps = testing::load("p_eps_0.05.poly");
    const auto full = solve(ps);
    REQUIRE(full.status == SolveStatus::Certified);
    double previous = 1e300;
    for (int budget = 0; budget <= full.stats.refinements; budget += 2) {
        SolveParams params;
        params.max_refinements = budget;
        const auto partial = solve(ps, params);
        CHECK(partial.stats.refinements <= budget);
        const double diam = max_cone_diameter(partial.dec);
        CHECK(diam <= previous + 1e-12);
        previous = diam;
        if (budget < full.stats.refinements) {
            CHECK(partial.status == SolveStatus::BudgetExhausted);
            CHECK_FALSE(partial.failed.empty());
        }
    }
}

TEST_CASE("an exhausted budget reports the failing faces") {
    SolveParams params;
    params.max_refinements = 0;
    const auto sol = solve(testing::load("p_eps_0.005.poly"), params);
    CHECK(sol.status == SolveStatus::BudgetExhausted);
    CHECK(sol.stats.refinements == 0);
    REQUIRE_FALSE(sol.failed.empty());
    for (const auto& f : sol.failed) CHECK(sol.dec.has_face(f));
    CHECK(std::string(to_string(sol.status)) != to_string(SolveStatus::Certified));
}

TEST_CASE("invalid parameters are rejected") {
    const auto ps = testing::load("conic.poly");
    SolveParams p;
    p.max_splits = -1;
    CHECK_THROWS_AS(solve(ps, p), std::invalid_argument);
    p = {};
    p.tol = 0;
    CHECK_THROWS_AS(solve(ps, p), std::invalid_argument);
    p = {};
    p.threads = -2;
    CHECK_THROWS_AS(solve(ps, p), std::invalid_argument);
    CHECK_THROWS_AS(main_loop(initial_decomposition(3), ps, {}), std::invalid_argument);
}

TEST_CASE("schedule order puts higher-dimensional faces first") {
    ScheduleLess less;
    CHECK(less(FaceKey{0, 2, 4}, FaceKey{0, 2}));
    CHECK(less(FaceKey{0, 2}, FaceKey{0, 3}));
    CHECK_FALSE(less(FaceKey{0}, FaceKey{0, 2}));
}

TEST_CASE("codimension two input certifies") {
    const auto sol = solve(testing::load("codim2.poly"));
    CHECK(sol.status == SolveStatus::Certified);
    CHECK(sol.certificates.size() == sol.dec.faces().size());
}
