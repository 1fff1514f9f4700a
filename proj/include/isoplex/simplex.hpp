#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoplex/matrix.hpp"
#include "isoplex/rational.hpp"

namespace isoplex {

using VertexId = int;
using ConeId = int;

/// Sorted vertex ids of a face; a face with k + 1 vertices has dimension k.
using FaceKey = std::vector<VertexId>;

/// Dimension-major, then lexicographic on the sorted ids.
struct FaceKeyLess {
    bool operator()(const FaceKey& a, const FaceKey& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

std::string face_key_string(const FaceKey& f);

struct Vertex {
    VertexId id = -1;
    std::vector<Rational> ray;  // nonzero
    std::vector<double> unit;   // ray / |ray|
    VertexId antipode = -1;
};

struct Cone {
    ConeId id = -1;
    std::vector<VertexId> verts;  // sorted, n + 1 entries
};

/// Ray of the vertex inserted on a split edge a-b.
enum class RayRule {
    Sum,       // a + b
    NearUnit,  // (a + b) * s with s a dyadic rational (10 fractional bits) close to 1 / |a + b|
};

/// What one edge split changed.
struct RefineDelta {
    FaceKey edge;
    VertexId new_vertex = -1;
    VertexId new_antipode = -1;
    std::vector<ConeId> removed_cones;
    std::vector<ConeId> added_cones;
    /// Faces that are new or whose coface set changed (all faces of added cones).
    std::vector<FaceKey> dirty_faces;
    /// Faces that no longer exist.
    std::vector<FaceKey> removed_faces;
};

struct ValidationReport {
    bool ok = true;
    std::string kind;  // "vertex", "antipode", "rank", "symmetry", "faces", "manifold", "orientation", "cover"
    std::string message;
    std::vector<ConeId> cones;

    explicit operator bool() const { return ok; }
};

/**
 * Antipodally symmetric decomposition of R^{n+1} into simplicial cones.
 *
 * Vertices are rays kept as exact rationals (with unit float images); a cone is a sorted list of
 * n + 1 vertex ids; the face index maps every face of every cone to the cones containing it.
 */
class Decomposition {
public:
    Decomposition() = default;

    /// The 2^{n+1} orthant cones over +-e_0, ..., +-e_n. Vertex 2i is +e_i, vertex 2i+1 is -e_i.
    static Decomposition initial(int n);

    /// Same combinatorics with vertex 2i = +column i and 2i+1 = -column i of an invertible frame.
    static Decomposition initial(const Matrix<Rational>& frame);

    /// Builds from explicit vertices and cones; antipodes are matched by negated rays.
    /// Throws std::invalid_argument on structural inconsistencies (duplicate ids, bad arity).
    static Decomposition from_parts(int ambient_dim, std::vector<std::pair<VertexId, std::vector<Rational>>> vertices,
                                    std::vector<Cone> cones);

    int ambient_dim() const { return ambient_dim_; }
    int n() const { return ambient_dim_ - 1; }
    std::uint64_t generation() const { return generation_; }

    std::size_t vertex_count() const { return vertices_.size(); }
    const Vertex& vertex(VertexId id) const;
    const std::vector<Vertex>& vertices() const { return vertices_; }

    std::size_t cone_count() const { return cones_.size(); }
    const Cone& cone(ConeId id) const;
    const std::map<ConeId, Cone>& cones() const { return cones_; }

    const std::map<FaceKey, std::vector<ConeId>, FaceKeyLess>& faces() const { return faces_; }
    bool has_face(const FaceKey& f) const { return faces_.count(f) != 0; }
    const std::vector<ConeId>& cofaces(const FaceKey& f) const;

    /// Sorted ids of the antipodal face.
    FaceKey antipode(const FaceKey& f) const;

    /// Splits `edge` and its antipodal edge on the ray given by `rule`; every coface is cut in two.
    RefineDelta split_edge(const FaceKey& edge, RayRule rule = RayRule::Sum);

    std::string dump() const;

private:
    void add_cone(Cone c);
    void remove_cone(ConeId id);
    VertexId add_vertex(std::vector<Rational> ray);

    int ambient_dim_ = 0;
    std::uint64_t generation_ = 0;
    ConeId next_cone_id_ = 0;
    std::vector<Vertex> vertices_;
    std::map<ConeId, Cone> cones_;
    std::map<FaceKey, std::vector<ConeId>, FaceKeyLess> faces_;
};

Decomposition initial_decomposition(int n);

/**
 * Rational rotation of R^dim, the Cayley transform (I - S)(I + S)^{-1} of a fixed skew-symmetric
 * matrix S with small rational entries. Its columns have exact unit length and are in general
 * position with respect to the coordinate axes, so inputs with coordinate symmetries do not
 * place their zeros on the initial vertices and edges.
 */
Matrix<Rational> generic_frame(int dim);

/// Snapshot-returning refinement.
std::pair<Decomposition, RefineDelta> refine(const Decomposition& dec, const FaceKey& edge, RayRule rule = RayRule::Sum);

struct ValidateOptions {
    int random_samples = 1000;
    std::uint64_t seed = 1;
};

ValidationReport validate(const Decomposition& dec, const ValidateOptions& opts = {});

/// Exact structural checks only (no float sampling); used by certificate replay.
ValidationReport validate_exact(const Decomposition& dec);

/// Columns are the rational rays of the face's vertices in id order.
Matrix<Rational> face_matrix(const Decomposition& dec, const FaceKey& face);

/// Longest edge (by unit-vector distance) of the face, ties to the smallest id pair; a vertex face
/// escalates to the longest edge over all its cofaces.
FaceKey choose_refinement_edge(const Decomposition& dec, const FaceKey& failed_face);

/// All faces in deterministic order (dimension-major, then ids) with their cofaces.
std::vector<std::pair<FaceKey, std::vector<ConeId>>> faces_iter(const Decomposition& dec);

/// Largest angular distance (radians) between two vertices of one cone, over all cones.
double max_cone_diameter(const Decomposition& dec);

}  // namespace isoplex
