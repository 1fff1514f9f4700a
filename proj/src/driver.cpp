#include "isoplex/driver.hpp"

#include <omp.h>

#include <chrono>
#include <exception>
#include <set>
#include <stdexcept>

#include "isoplex/log.hpp"

namespace isoplex {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Certified: return "certified";
        case SolveStatus::BudgetExhausted: return "budget-exhausted";
    }
    return "?";
}

std::vector<FaceTestResult> test_faces_serial(const Decomposition& dec, const PolySystem& ps, const TildeP& tilde,
                                              const ConeGradients& grads, const std::vector<FaceKey>& faces,
                                              const CriterionParams& params) {
    std::vector<FaceTestResult> out;
    out.reserve(faces.size());
    for (const auto& f : faces) out.push_back(test_face(dec, ps, tilde, grads, f, params));
    return out;
}

std::vector<FaceTestResult> test_faces_parallel(const Decomposition& dec, const PolySystem& ps, const TildeP& tilde,
                                                const ConeGradients& grads, const std::vector<FaceKey>& faces,
                                                const CriterionParams& params, int threads) {
    std::vector<FaceTestResult> out(faces.size());
    std::exception_ptr error;
    const long count = static_cast<long>(faces.size());
    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
    for (long i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = test_face(dec, ps, tilde, grads, faces[static_cast<std::size_t>(i)], params);
        } catch (...) {
#pragma omp critical(isoplex_face_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
}

SolveOutcome main_loop(Decomposition dec, const PolySystem& ps, const SolveParams& params) {
    if (params.max_splits < 0 || params.max_refinements < 0 || !(params.tol > 0) || params.threads < 0)
        throw std::invalid_argument("solve parameters must be positive");
    if (dec.ambient_dim() != ps.nvars()) throw std::invalid_argument("decomposition and system dimensions differ");

    const auto start = std::chrono::steady_clock::now();
    SolveOutcome out;
    out.tilde = TildeP(dec, ps);
    std::vector<ConeId> all_cones;
    for (const auto& [id, c] : dec.cones()) all_cones.push_back(id);
    ConeGradients grads = cone_gradients(dec, out.tilde, all_cones);
    const CriterionParams cparams{params.max_splits, params.tol};

    std::set<FaceKey, ScheduleLess> pending;
    std::set<FaceKey, ScheduleLess> failed;
    for (const auto& [f, cof] : dec.faces()) pending.insert(f);

    for (;;) {
        const std::vector<FaceKey> batch(pending.begin(), pending.end());
        pending.clear();
        const auto results = params.threads == 1 ? test_faces_serial(dec, ps, out.tilde, grads, batch, cparams)
                                                 : test_faces_parallel(dec, ps, out.tilde, grads, batch, cparams, params.threads);
        ++out.stats.passes;
        out.stats.faces_tested += batch.size();
        for (std::size_t i = 0; i < batch.size(); ++i) {
            out.stats.nodes += results[i].nodes;
            if (results[i].passed) {
                out.certificates[batch[i]] = results[i].cert;
                failed.erase(batch[i]);
            } else {
                out.certificates.erase(batch[i]);
                failed.insert(batch[i]);
            }
        }
        if (failed.empty()) {
            out.status = SolveStatus::Certified;
            break;
        }
        if (out.stats.refinements >= params.max_refinements) {
            out.status = SolveStatus::BudgetExhausted;
            out.failed.assign(failed.begin(), failed.end());
            break;
        }

        const FaceKey& trigger = *failed.begin();
        const FaceKey edge = choose_refinement_edge(dec, trigger);
        const RefineDelta delta = dec.split_edge(edge, params.ray_rule);
        ++out.stats.refinements;
        log("refine #", out.stats.refinements, " face {", face_key_string(trigger), "} edge {", face_key_string(edge),
            "} cones ", dec.cone_count(), " failing ", failed.size());

        out.tilde.extend(dec, ps);
        for (ConeId c : delta.removed_cones) grads.erase(c);
        for (auto& [id, g] : cone_gradients(dec, out.tilde, delta.added_cones)) grads.emplace(id, std::move(g));
        for (const auto& f : delta.removed_faces) {
            failed.erase(f);
            out.certificates.erase(f);
        }
        for (const auto& f : delta.dirty_faces) {
            failed.erase(f);
            out.certificates.erase(f);
            pending.insert(f);
        }
    }

    for (const auto& [f, cert] : out.certificates) out.stats.max_depth = std::max(out.stats.max_depth, tree_depth(cert.root));
    out.dec = std::move(dec);
    out.stats.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log("finished: ", to_string(out.status), " after ", out.stats.refinements, " refinements, ", out.stats.faces_tested,
        " face tests, ", out.stats.wall_time, " s");
    return out;
}

SolveOutcome solve(const PolySystem& ps, const SolveParams& params) {
    Decomposition dec = params.generic_frame ? Decomposition::initial(generic_frame(ps.nvars())) : Decomposition::initial(ps.nvars() - 1);
    return main_loop(std::move(dec), ps, params);
}

}  // namespace isoplex
