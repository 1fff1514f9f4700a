#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "isoplex/criterion.hpp"
#include "isoplex/poly.hpp"
#include "isoplex/simplex.hpp"

namespace isoplex {

struct SolveParams {
    int max_splits = 16;
    int max_refinements = 10000;
    double tol = 0x1p-30;
    std::uint64_t seed = 1;
    /// 1 runs the serial reference path; 0 lets OpenMP choose.
    int threads = 1;
    RayRule ray_rule = RayRule::NearUnit;
    /// Start from the cross-polytope on generic_frame() instead of the coordinate axes.
    bool generic_frame = true;
};

struct SolveStats {
    std::size_t faces_tested = 0;
    std::size_t nodes = 0;
    int refinements = 0;
    int passes = 0;
    int max_depth = 0;
    double wall_time = 0;
};

enum class SolveStatus { Certified, BudgetExhausted };

const char* to_string(SolveStatus s);

struct SolveOutcome {
    SolveStatus status = SolveStatus::BudgetExhausted;
    Decomposition dec;
    TildeP tilde;
    std::map<FaceKey, FaceCertificate, FaceKeyLess> certificates;
    SolveStats stats;
    /// Faces still failing when the budget ran out.
    std::vector<FaceKey> failed;
};

/// Scheduling order: higher-dimensional faces first, then by vertex ids.
struct ScheduleLess {
    bool operator()(const FaceKey& a, const FaceKey& b) const {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    }
};

/// Tests a batch of faces on one snapshot; results line up with `faces`.
std::vector<FaceTestResult> test_faces_serial(const Decomposition& dec, const PolySystem& ps, const TildeP& tilde,
                                              const ConeGradients& grads, const std::vector<FaceKey>& faces,
                                              const CriterionParams& params);

/// OpenMP version of test_faces_serial with identical output.
std::vector<FaceTestResult> test_faces_parallel(const Decomposition& dec, const PolySystem& ps, const TildeP& tilde,
                                                const ConeGradients& grads, const std::vector<FaceKey>& faces,
                                                const CriterionParams& params, int threads);

/**
 * Tests every face, then repeatedly refines the first failing face (in schedule order) and
 * retests the faces whose cofaces changed, until no face fails or the refinement budget is spent.
 */
SolveOutcome main_loop(Decomposition dec, const PolySystem& ps, const SolveParams& params);

SolveOutcome solve(const PolySystem& ps, const SolveParams& params = {});

}  // namespace isoplex
