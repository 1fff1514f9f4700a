// Prints one [PASS]/[FAIL] line per acceptance criterion; exit status 1 when any fails.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "isoplex/bernstein.hpp"
#include "isoplex/cli.hpp"
#include "isoplex/driver.hpp"
#include "isoplex/minnorm.hpp"
#include "isoplex/random_poly.hpp"
#include "isoplex/topo.hpp"
#include "isoplex/verify.hpp"
#include "support/helpers.hpp"
#include "support/lp_oracle.hpp"
#include "support/tamper.hpp"

using namespace isoplex;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Run {
    std::string name;
    PolySystem ps;
    SolveOutcome sol;
    double solve_time = 0;
    double verify_time = 0;
    bool accepted = false;
    TopoReport sphere;
    TopoReport proj;
};

// Every analyzed complex, for the Euler characteristic check.
std::vector<std::pair<std::string, TopoReport>> g_complexes;

Run run(const std::string& name, const PolySystem& ps, int reps = 1) {
    // both phases are timed as the best of `reps` runs
    Run r{name, ps, {}, 1e300, 1e300, false, {}, {}};
    for (int rep = 0; rep < reps; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        r.sol = solve(ps);
        r.solve_time = std::min(r.solve_time, seconds_since(start));
    }
    if (r.sol.status != SolveStatus::Certified) return r;

    std::vector<FaceCertificate> faces;
    for (const auto& [k, fc] : r.sol.certificates) faces.push_back(fc);
    const std::string text = write_certificate(make_certificate(ps, r.sol.dec, r.sol.tilde, faces));
    for (int rep = 0; rep < reps; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        r.accepted = check_certificate(ps, parse_certificate(text)).accepted();
        r.verify_time = std::min(r.verify_time, seconds_since(start));
    }

    const auto sphere = extract(r.sol.dec, r.sol.tilde);
    r.sphere = analyze(sphere);
    r.proj = analyze(projective_quotient(r.sol.dec, sphere));
    g_complexes.emplace_back(name + " (sphere)", r.sphere);
    g_complexes.emplace_back(name + " (projective)", r.proj);
    return r;
}

Run run(const std::string& file, int reps = 1) { return run(file, testing::load(file), reps); }

bool certified(const Run& r) { return r.sol.status == SolveStatus::Certified && r.accepted; }

std::string betti_string(const std::vector<int>& b) {
    std::string s = "(";
    for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
    return s + ")";
}

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << ". " << title << ": " << detail << std::endl;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(3) << x;
    return os.str();
}

// 1. quartic family
std::vector<Run> criterion_quartics() {
    std::vector<Run> runs;
    bool pass = true;
    std::ostringstream detail;
    for (const char* eps : {"0.5", "0.05", "0.005"}) {
        runs.push_back(run(std::string("p_eps_") + eps + ".poly", 3));
        const Run& r = runs.back();
        const bool ok = certified(r) && r.proj.components == 4 && r.solve_time + r.verify_time <= 60.0;
        pass = pass && ok;
        detail << "eps=" << eps << " components=" << r.proj.components << " depth=" << r.sol.stats.max_depth
               << " time=" << fmt(r.solve_time) << "s" << (certified(r) ? "" : " NOT CERTIFIED") << "; ";
    }
    const int depth = runs.back().sol.stats.max_depth;
    pass = pass && depth >= 5 && depth <= 20;
    detail << "depth(0.005) in [5,20]";
    report(1, "quartic family has 4 components", pass, detail.str());
    return runs;
}

// 2. concentric circles
std::vector<Run> criterion_circles() {
    std::vector<Run> runs{run("circles_1.poly", 3), run("circles_0.1.poly", 3)};
    bool pass = true;
    std::ostringstream detail;
    for (const Run& r : runs) {
        pass = pass && certified(r) && r.proj.components == 2 && r.solve_time + r.verify_time <= 120.0;
        detail << r.name << " components=" << r.proj.components << " simplices=" << r.sol.dec.cone_count() / 2
               << " time=" << fmt(r.solve_time) << "s; ";
    }
    pass = pass && runs[1].sol.dec.cone_count() > runs[0].sol.dec.cone_count();
    detail << "simplex count grows as alpha shrinks";
    report(2, "concentric circles have 2 components", pass, detail.str());
    return runs;
}

// 3. trivial varieties
std::vector<Run> criterion_trivial() {
    std::vector<Run> runs{run("empty.poly", 3), run("line.poly", 3), run("conic.poly", 3)};
    const Run& empty = runs[0];
    const Run& line = runs[1];
    const Run& conic = runs[2];
    const bool pass = certified(empty) && empty.proj.components == 0 && empty.sol.stats.refinements == 0 &&
                      certified(line) && line.proj.components == 1 && line.proj.betti == std::vector<int>{1, 1} &&
                      certified(conic) && conic.proj.components == 1 && conic.proj.betti == std::vector<int>{1, 1};
    std::ostringstream detail;
    detail << "empty components=" << empty.proj.components << " refinements=" << empty.sol.stats.refinements
           << "; line b=" << betti_string(line.proj.betti) << "; conic components=" << conic.proj.components
           << " b=" << betti_string(conic.proj.betti);
    report(3, "empty and trivial varieties", pass, detail.str());
    return runs;
}

// 4. codimension two through the command line, for the report caveat
void criterion_codim2() {
    const auto dir = std::filesystem::temp_directory_path() / "isoplex_acceptance_codim2";
    std::filesystem::create_directories(dir);
    const std::string input = testing::data_path("codim2.poly");
    const std::string out_dir = dir.string();
    const char* argv[] = {"isoplex", "solve", input.c_str(), "--out", out_dir.c_str(), "--format", "json"};
    std::ostringstream out, err;
    const int code = run_cli(7, argv, out, err);
    bool pass = code == exit_ok;
    std::ostringstream detail;
    detail << "exit=" << code;
    if (pass) {
        const auto j = nlohmann::json::parse(out.str());
        const auto guarantee = j["guarantee"].get<std::string>();
        pass = j["verification"] == "accepted" && j["components"] == 1 && guarantee.find("conjecture") != std::string::npos;
        detail << " components=" << j["components"] << " guarantee=\"" << guarantee << "\"";
    } else {
        detail << " " << err.str();
    }
    run("codim2.poly");  // complexes for the Euler check
    report(4, "codimension 2 smoke", pass, detail.str());
}

// 5. random plane sextics
void criterion_sextics() {
    int certified_count = 0, max_b0 = 0;
    bool pass = true;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Run r = run("sextic seed " + std::to_string(seed), random_bombieri_system(3, {6}, seed));
        if (r.sol.status != SolveStatus::Certified) continue;
        ++certified_count;
        pass = pass && r.accepted && r.proj.components <= 11;
        max_b0 = std::max(max_b0, r.proj.components);
    }
    pass = pass && certified_count > 0;
    report(5, "sextic component bound", pass,
           std::to_string(certified_count) + "/20 certified, max b0=" + std::to_string(max_b0) + " (bound 11)");
}

// 6. oracle suites
void criterion_oracles(const std::vector<Run>& quartics) {
    std::ostringstream detail;
    bool pass = true;

    // minnorm against the exact LP oracle
    {
        std::mt19937_64 rng(2024);
        std::uniform_int_distribution<int> coord(-16, 16);
        int disagree = 0, inconclusive = 0;
        for (int t = 0; t < 500; ++t) {
            Matrix<double> a(6, 3);
            const int shift = t % 3 == 0 ? 0 : 6;
            for (std::size_t r = 0; r < 6; ++r)
                for (std::size_t c = 0; c < 3; ++c) a(r, c) = (coord(rng) + (c == 0 ? shift : 0)) / 8.0;
            const auto res = separate(a);
            if (res.verdict == Verdict::Inconclusive) {
                ++inconclusive;
                continue;
            }
            if (testing::lp_oracle(a).inside != (res.verdict == Verdict::Inside)) ++disagree;
        }
        pass = pass && disagree == 0;
        detail << "LP " << 500 - inconclusive << " decided/" << disagree << " disagree; ";
    }

    // float Bernstein evaluation against exact monomial evaluation
    {
        std::mt19937_64 rng(4040);
        std::uniform_int_distribution<int> weight(1, 64);
        int bad = 0;
        double worst = 0;
        for (int t = 0; t < 1000; ++t) {
            const int degree = 1 + t % 6;
            const auto p = testing::random_poly(rng, 3, degree);
            const auto m = testing::random_rational_matrix(rng, 3, 3);
            const auto dense = to_dense(p.substitute_linear(m));
            DensePoly<double> f(dense.nvars, dense.degree);
            for (std::size_t r = 0; r < dense.coeffs.size(); ++r) f.coeffs[r] = to_double(dense.coeffs[r]);
            const auto bern = to_bernstein(f);

            std::vector<Rational> lambda(3);
            Rational total = 0;
            for (auto& l : lambda) total += (l = weight(rng));
            for (auto& l : lambda) l /= total;
            std::vector<double> lambda_f(3);
            for (std::size_t i = 0; i < 3; ++i) lambda_f[i] = to_double(lambda[i]);
            std::vector<Rational> x(3, Rational(0));
            for (std::size_t r = 0; r < 3; ++r)
                for (std::size_t c = 0; c < 3; ++c) x[r] += m(r, c) * lambda[c];

            const double exact = to_double(p.eval(std::span<const Rational>(x)));
            const double approx = de_casteljau(bern, std::span<const double>(lambda_f));
            double scale = 0;
            for (double b : bern.coeffs) scale = std::max(scale, std::abs(b));
            const double rel = scale > 0 ? std::abs(approx - exact) / scale : std::abs(approx - exact);
            worst = std::max(worst, rel);
            if (rel > std::ldexp(1.0, -40)) ++bad;
        }
        pass = pass && bad == 0;
        detail << "Bernstein 1000 cases worst rel " << fmt(worst) << "; ";
    }

    // tamper fuzz on the quartic certificates
    {
        std::vector<std::pair<const Run*, Certificate>> bases;
        for (const Run& r : quartics) {
            std::vector<FaceCertificate> faces;
            for (const auto& [k, fc] : r.sol.certificates) faces.push_back(fc);
            bases.emplace_back(&r, make_certificate(r.ps, r.sol.dec, r.sol.tilde, faces));
        }
        const auto& kinds = testing::tamper_kinds();
        std::mt19937_64 rng(99);
        int applied = 0, accepted = 0;
        for (int t = 0; applied < 100 && t < 1000; ++t) {
            auto& [r, base] = bases[static_cast<std::size_t>(t) % bases.size()];
            Certificate c = base;
            if (!testing::tamper(c, static_cast<std::size_t>(t / 3) % kinds.size(), rng)) continue;
            ++applied;
            if (!testing::rejected_after_round_trip(r->ps, c)) ++accepted;
        }
        pass = pass && applied == 100 && accepted == 0;
        detail << "tamper " << applied << " mutations/" << accepted << " accepted; ";
    }

    // Euler characteristic on every complex extracted so far
    {
        int inconsistent = 0;
        for (const auto& [name, rep] : g_complexes)
            if (!rep.euler_consistent()) ++inconsistent;
        pass = pass && inconsistent == 0 && !g_complexes.empty();
        detail << "chi on " << g_complexes.size() << " complexes/" << inconsistent << " inconsistent";
    }
    report(6, "oracle suites", pass, detail.str());
}

// 7. verification cost
void criterion_cost(const std::vector<Run>& gated, const std::vector<Run>& trivial) {
    bool pass = true;
    double worst = 0;
    std::ostringstream detail;
    detail << "verify/solve";
    for (const Run& r : gated) {
        const double ratio = r.verify_time / r.solve_time;
        worst = std::max(worst, ratio);
        pass = pass && r.verify_time <= r.solve_time;
        detail << " " << r.name << " " << fmt(ratio);
    }
    detail << "; max " << fmt(worst) << " (limit 1)";
    detail << "; not gated, sub-millisecond cases:";
    for (const Run& r : trivial) detail << " " << r.name << " " << fmt(r.verify_time / r.solve_time);
    report(7, "verification cost", pass, detail.str());
}

}  // namespace

int main() {
    try {
        const auto quartics = criterion_quartics();
        const auto circles = criterion_circles();
        const auto trivial = criterion_trivial();
        criterion_codim2();
        criterion_sextics();
        criterion_oracles(quartics);
        std::vector<Run> gated = quartics;
        gated.insert(gated.end(), circles.begin(), circles.end());
        criterion_cost(gated, trivial);
    } catch (const std::exception& e) {
        std::cout << "[FAIL] acceptance aborted: " << e.what() << std::endl;
        return 1;
    }
    std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed")) << std::endl;
    return failures ? 1 : 0;
}
