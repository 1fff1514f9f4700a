#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "isoplex/matrix.hpp"
#include "isoplex/minnorm.hpp"
#include "isoplex/poly.hpp"
#include "isoplex/rational.hpp"
#include "isoplex/simplex.hpp"

namespace isoplex {

/// Exact values p_i(ray(v)) for every vertex, indexed by vertex id; they define the interpolant.
class TildeP {
public:
    TildeP() = default;
    TildeP(const Decomposition& dec, const PolySystem& ps);

    static TildeP from_values(std::vector<std::vector<Rational>> values);

    /// Evaluates every vertex of `dec` not yet present.
    void extend(const Decomposition& dec, const PolySystem& ps);

    std::size_t size() const { return exact_.size(); }
    const std::vector<Rational>& values(VertexId v) const { return exact_.at(static_cast<std::size_t>(v)); }
    const std::vector<double>& float_values(VertexId v) const { return float_.at(static_cast<std::size_t>(v)); }

    friend bool operator==(const TildeP& a, const TildeP& b) { return a.exact_ == b.exact_; }

private:
    void push(std::vector<Rational> vals);

    std::vector<std::vector<Rational>> exact_;
    std::vector<std::vector<double>> float_;
};

/// m x (n+1) matrix G with G * ray(v) = tilde(v) for every vertex of the cone.
Matrix<Rational> grad_of_tilde(const Decomposition& dec, const TildeP& tilde, ConeId cone);

/// Certificate tree node. Split children: [0] keeps the edge's first endpoint, [1] its second.
struct CertNode {
    enum class Kind { Sign, Separation, Split };
    Kind kind = Kind::Sign;
    int poly = -1;  // Sign
    int sign = 0;   // Sign: +1 or -1
    std::vector<std::pair<SignVector, std::vector<Rational>>> witnesses;  // Separation
    int edge = -1;                                                        // Split
    std::vector<CertNode> children;                                       // Split

    friend bool operator==(const CertNode&, const CertNode&) = default;
};

int tree_depth(const CertNode& n);
std::size_t tree_size(const CertNode& n);

/// Local pair (i, j), i < j, for edge index e of a simplex with k vertices; pairs enumerate as (0,1), (0,2), ..., (1,2), ...
std::pair<int, int> edge_endpoints(int k, int e);
int edge_count(int k);

struct FaceCertificate {
    FaceKey face;
    CertNode root;

    friend bool operator==(const FaceCertificate&, const FaceCertificate&) = default;
};

struct CriterionParams {
    int max_splits = 16;
    double tol = 0x1p-30;
};

struct FaceTestResult {
    bool passed = false;
    FaceCertificate cert;  // meaningful when passed
    int depth = 0;
    std::size_t nodes = 0;
};

/// Float gradient rows of the interpolant on each cone, cached across faces.
using ConeGradients = std::map<ConeId, Matrix<double>>;

ConeGradients cone_gradients(const Decomposition& dec, const TildeP& tilde, const std::vector<ConeId>& cones);

/**
 * Face test with subdivision: a node passes if some p_i and its interpolant have strictly one
 * sign over the node's sub-simplex (Bernstein enclosure), or if the pooled gradient rows (Bernstein
 * coefficients of grad p_i plus the interpolant gradients of every coface) are strongly full rank.
 * Otherwise the longest chart edge is bisected, up to params.max_splits levels.
 *
 * `grads` must hold every coface of `face`.
 */
FaceTestResult test_face(const Decomposition& dec, const PolySystem& ps, const TildeP& tilde, const ConeGradients& grads,
                         const FaceKey& face, const CriterionParams& params = {});

/// Convenience overload computing the coface gradients on the fly.
FaceTestResult test_face(const Decomposition& dec, const PolySystem& ps, const TildeP& tilde, const FaceKey& face,
                         const CriterionParams& params = {});

}  // namespace isoplex
