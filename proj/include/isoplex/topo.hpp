#pragma once

#include <string>
#include <vector>

#include "isoplex/criterion.hpp"
#include "isoplex/rational.hpp"
#include "isoplex/simplex.hpp"

namespace isoplex {

/**
 * One open cell of the zero set of the interpolant.
 *
 * Inside the decomposition face `support` (barycentric coordinates lambda over its rays), the
 * interpolant is T lambda with T the m x |support| matrix of vertex values, so the zero set meets
 * the relative interior of the face in an open convex polytope. Every nonempty such piece is a
 * cell; distinct faces give disjoint cells and gluing across cones is by face identity.
 */
struct PLCell {
    FaceKey support;
    int dim = 0;
    /// Indices of the facets (cells of dimension dim - 1 in the closure).
    std::vector<int> boundary;
    /// 0-cells only: the point sum_j lambda_j ray_j.
    std::vector<Rational> point;
};

struct PLCellComplex {
    int ambient_dim = 0;
    int m = 0;
    bool projective = false;
    /// Sorted by (dim, support); boundary indices refer to this vector.
    std::vector<PLCell> cells;

    int top_dim() const { return ambient_dim - 1 - m; }
    std::vector<std::size_t> cell_counts() const;
};

/// Cells of {x : tilde(x) = 0}, computed in exact arithmetic. threads == 1 runs serially.
PLCellComplex extract(const Decomposition& dec, const TildeP& tilde, int threads = 1);

/**
 * Identifies every cell with its antipodal image, keeping the representative with the smaller
 * support. Throws std::invalid_argument when some cell has no antipodal partner.
 */
PLCellComplex projective_quotient(const Decomposition& dec, const PLCellComplex& cc);

/// Component label of each cell (labels 0, 1, ... in order of first cell).
std::vector<int> component_labels(const PLCellComplex& cc);
int components(const PLCellComplex& cc);

/// Z/2 Betti numbers b_0 .. b_top of the cellular chain complex (restricted to `subset` if nonempty).
std::vector<int> betti_z2(const PLCellComplex& cc, const std::vector<int>& subset = {});

struct TopoReport {
    bool projective = false;
    int components = 0;
    std::vector<int> betti;
    std::vector<std::vector<int>> component_betti;
    std::vector<std::size_t> cell_counts;
    long euler_cells = 0;
    long euler_betti = 0;

    bool euler_consistent() const { return euler_cells == euler_betti; }
};

TopoReport analyze(const PLCellComplex& cc);

/// True when every cell of dimension top - 1 lies in the boundary of exactly two top cells.
bool is_pseudo_manifold(const PLCellComplex& cc);

/// Ordered vertex cycle (0-cell indices) around a 2-cell.
std::vector<int> polygon_vertices(const PLCellComplex& cc, int cell);

/**
 * Writes the complex with unit-normalized float coordinates. Surfaces (top dimension 2) become
 * OFF polygons; curves (top dimension 1) get an OFF with vertices only and a sidecar
 * `<path>.edges` holding `e <v1> <v2>` lines. Headers are `OFF` in R^3, `4OFF` in R^4 and
 * `nOFF <dim>` otherwise. Throws std::invalid_argument for other top dimensions.
 */
void export_off(const PLCellComplex& cc, const std::string& path);

}  // namespace isoplex
