// Serial reference vs OpenMP timings for the three parallel kernels: face testing, exact
// certificate replay and zero-set extraction. Each kernel's outputs are compared for equality.

#include <CLI11.hpp>

#include <chrono>
#include <iomanip>
#include <iostream>

#include "isoplex/driver.hpp"
#include "isoplex/parse.hpp"
#include "isoplex/topo.hpp"
#include "isoplex/verify.hpp"

using namespace isoplex;

namespace {

template <typename Fn>
double best_of(int reps, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    return best;
}

void row(const std::string& kernel, double serial, double parallel, bool same) {
    std::cout << std::left << std::setw(12) << kernel << std::setw(14) << serial << std::setw(14) << parallel << std::setw(10)
              << (parallel > 0 ? serial / parallel : 0.0) << (same ? "identical" : "MISMATCH") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial vs OpenMP kernel benchmark"};
    std::string input;
    int threads = 0;
    int reps = 3;
    app.add_option("input", input, "Polynomial file")->required()->check(CLI::ExistingFile);
    app.add_option("--threads", threads, "OpenMP threads (0 = default)");
    app.add_option("--reps", reps, "Repetitions, best time kept")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    try {
        const PolySystem ps = read_system_file(input);
        const SolveOutcome sol = solve(ps);
        if (sol.status != SolveStatus::Certified) {
            std::cerr << "input did not certify within the default budget\n";
            return 2;
        }
        const Decomposition& dec = sol.dec;
        std::vector<FaceKey> faces;
        std::vector<ConeId> cones;
        for (const auto& [f, cof] : dec.faces()) faces.push_back(f);
        for (const auto& [id, c] : dec.cones()) cones.push_back(id);
        const ConeGradients grads = cone_gradients(dec, sol.tilde, cones);
        const CriterionParams cp;

        std::cout << input << ": " << faces.size() << " faces, " << dec.cone_count() << " cones\n";
        std::cout << std::left << std::setw(12) << "kernel" << std::setw(14) << "serial s" << std::setw(14) << "openmp s"
                  << std::setw(10) << "speedup" << "outputs\n";

        std::vector<FaceTestResult> rs, rp;
        const double ts = best_of(reps, [&] { rs = test_faces_serial(dec, ps, sol.tilde, grads, faces, cp); });
        const double tp = best_of(reps, [&] { rp = test_faces_parallel(dec, ps, sol.tilde, grads, faces, cp, threads); });
        bool same = rs.size() == rp.size();
        for (std::size_t i = 0; same && i < rs.size(); ++i) same = rs[i].passed == rp[i].passed && rs[i].cert == rp[i].cert;
        row("criterion", ts, tp, same);

        std::vector<FaceCertificate> fcs;
        for (const auto& [k, fc] : sol.certificates) fcs.push_back(fc);
        const Certificate cert = make_certificate(ps, dec, sol.tilde, fcs);
        VerifyReport vs, vp;
        const double qs = best_of(reps, [&] { vs = check_certificate(ps, cert, 1); });
        const double qp = best_of(reps, [&] { vp = check_certificate(ps, cert, threads); });
        row("verify", qs, qp, vs.accepted() == vp.accepted() && vs.nodes_checked == vp.nodes_checked);

        PLCellComplex cs, cpx;
        const double es = best_of(reps, [&] { cs = extract(dec, sol.tilde, 1); });
        const double ep = best_of(reps, [&] { cpx = extract(dec, sol.tilde, threads); });
        bool same_cells = cs.cells.size() == cpx.cells.size();
        for (std::size_t i = 0; same_cells && i < cs.cells.size(); ++i)
            same_cells = cs.cells[i].support == cpx.cells[i].support && cs.cells[i].boundary == cpx.cells[i].boundary &&
                         cs.cells[i].point == cpx.cells[i].point;
        row("extract", es, ep, same_cells);
        return same && same_cells ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
