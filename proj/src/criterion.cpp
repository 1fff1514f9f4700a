#include "isoplex/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isoplex/bernstein.hpp"
#include "isoplex/dense_poly.hpp"
#include "isoplex/exact_linalg.hpp"

namespace isoplex {

TildeP::TildeP(const Decomposition& dec, const PolySystem& ps) { extend(dec, ps); }

TildeP TildeP::from_values(std::vector<std::vector<Rational>> values) {
    TildeP t;
    for (auto& v : values) t.push(std::move(v));
    return t;
}

void TildeP::push(std::vector<Rational> vals) {
    std::vector<double> f(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) f[i] = to_double(vals[i]);
    exact_.push_back(std::move(vals));
    float_.push_back(std::move(f));
}

void TildeP::extend(const Decomposition& dec, const PolySystem& ps) {
    for (std::size_t v = exact_.size(); v < dec.vertex_count(); ++v) {
        const auto& ray = dec.vertex(static_cast<VertexId>(v)).ray;
        std::vector<Rational> vals;
        vals.reserve(ps.polys().size());
        for (const auto& p : ps.polys()) vals.push_back(p.eval(std::span<const Rational>(ray)));
        push(std::move(vals));
    }
}

Matrix<Rational> grad_of_tilde(const Decomposition& dec, const TildeP& tilde, ConeId cone) {
    const auto& verts = dec.cone(cone).verts;
    const std::size_t amb = static_cast<std::size_t>(dec.ambient_dim());
    const std::size_t m = tilde.values(verts.front()).size();
    Matrix<Rational> r(amb, verts.size());
    Matrix<Rational> v(m, verts.size());
    for (std::size_t c = 0; c < verts.size(); ++c) {
        r.set_column(c, dec.vertex(verts[c]).ray);
        v.set_column(c, tilde.values(verts[c]));
    }
    auto g = exact::solve_right(r, v);
    if (!g) throw std::logic_error("grad_of_tilde: singular cone " + std::to_string(cone));
    return *g;
}

int tree_depth(const CertNode& n) {
    int d = 0;
    for (const auto& c : n.children) d = std::max(d, 1 + tree_depth(c));
    return d;
}

std::size_t tree_size(const CertNode& n) {
    std::size_t s = 1;
    for (const auto& c : n.children) s += tree_size(c);
    return s;
}

int edge_count(int k) { return k * (k - 1) / 2; }

std::pair<int, int> edge_endpoints(int k, int e) {
    if (e < 0 || e >= edge_count(k)) throw std::out_of_range("edge index " + std::to_string(e) + " out of range");
    for (int i = 0; i < k; ++i) {
        const int row = k - 1 - i;
        if (e < row) return {i, i + 1 + e};
        e -= row;
    }
    throw std::logic_error("unreachable");
}

ConeGradients cone_gradients(const Decomposition& dec, const TildeP& tilde, const std::vector<ConeId>& cones) {
    ConeGradients out;
    for (ConeId c : cones) out.emplace(c, to_double(grad_of_tilde(dec, tilde, c)));
    return out;
}

namespace {

// Bernstein coefficients computed in binary64 on unit-column charts are bounded by the
// coefficient 1-norm of the polynomial; these factors sit far above the rounding error of the
// expansion and far below any coefficient we want to trust.
constexpr double sign_threshold = 1e-11;
constexpr double row_threshold = 1e-11;
constexpr double separation_margin = 1e-7;

struct Context {
    Context(const Decomposition& d, const PolySystem& p, const CriterionParams& c) : dec(d), ps(p), params(c) {}

    const Decomposition& dec;
    const PolySystem& ps;
    const CriterionParams& params;
    std::size_t k = 0;           // face vertex count
    std::size_t amb = 0;
    Matrix<double> face_rays;    // amb x k
    Matrix<double> face_tilde;   // m x k
    std::vector<double> poly_l1;
    std::vector<double> grad_scale;
    std::vector<Matrix<double>> coface_rows;  // per poly: interpolant gradient rows of all cofaces
    bool coface_rows_ok = true;
    std::size_t nodes = 0;
    int max_depth = 0;
};

bool strict_sign(const std::vector<double>& coeffs, const std::vector<double>& thresholds, int s) {
    for (std::size_t r = 0; r < coeffs.size(); ++r)
        if (!(s * coeffs[r] > thresholds[r])) return false;
    return true;
}

bool test_node(Context& ctx, const Matrix<double>& w, int depth, CertNode& node) {
    ++ctx.nodes;
    ctx.max_depth = std::max(ctx.max_depth, depth);
    const std::size_t k = ctx.k;

    Matrix<double> chart = ctx.face_rays * w;
    std::vector<double> col_norm(k);
    for (std::size_t c = 0; c < k; ++c) {
        double s = 0;
        for (std::size_t r = 0; r < ctx.amb; ++r) s += chart(r, c) * chart(r, c);
        col_norm[c] = std::sqrt(s);
        for (std::size_t r = 0; r < ctx.amb; ++r) chart(r, c) /= col_norm[c];
    }

    const LinearPowers<double> powers(chart, ctx.ps.max_degree());
    const auto& polys = ctx.ps.polys();
    for (std::size_t i = 0; i < polys.size(); ++i) {
        const auto q = to_bernstein(substitute(polys[i].float_terms(), polys[i].degree(), powers));
        std::vector<double> lin(k), lin_thr(k);
        for (std::size_t c = 0; c < k; ++c) {
            double s = 0, a = 0;
            for (std::size_t j = 0; j < k; ++j) {
                s += ctx.face_tilde(i, j) * w(j, c);
                a += std::abs(ctx.face_tilde(i, j)) * w(j, c);
            }
            lin[c] = s / col_norm[c];
            lin_thr[c] = 1e-12 * a / col_norm[c];
        }
        const std::vector<double> q_thr(q.coeffs.size(), sign_threshold * ctx.poly_l1[i]);
        for (int s : {1, -1}) {
            if (strict_sign(q.coeffs, q_thr, s) && strict_sign(lin, lin_thr, s)) {
                node = CertNode{};
                node.kind = CertNode::Kind::Sign;
                node.poly = static_cast<int>(i);
                node.sign = s;
                return true;
            }
        }
    }

    if (ctx.coface_rows_ok) {
        const auto& grads = ctx.ps.gradients();
        std::vector<Matrix<double>> rows;
        bool usable = true;
        for (std::size_t i = 0; i < polys.size() && usable; ++i) {
            std::vector<BernsteinForm<double>> comps;
            for (const auto& g : grads[i]) comps.push_back(to_bernstein(substitute(g.float_terms(), g.degree(), powers)));
            const std::size_t count = comps.front().coeffs.size();
            const auto& extra = ctx.coface_rows[i];
            Matrix<double> block(count + extra.rows(), ctx.amb);
            for (std::size_t r = 0; r < count && usable; ++r) {
                double norm = 0;
                for (std::size_t j = 0; j < ctx.amb; ++j) {
                    block(r, j) = comps[j].coeffs[r];
                    norm += block(r, j) * block(r, j);
                }
                norm = std::sqrt(norm);
                if (!(norm > row_threshold * ctx.grad_scale[i])) usable = false;
                for (std::size_t j = 0; j < ctx.amb; ++j) block(r, j) /= norm;
            }
            for (std::size_t r = 0; r < extra.rows(); ++r)
                for (std::size_t j = 0; j < ctx.amb; ++j) block(count + r, j) = extra(r, j);
            rows.push_back(std::move(block));
        }
        if (usable) {
            SeparateOptions opts;
            opts.tol = ctx.params.tol;
            opts.margin = separation_margin;
            const RankResult rank = strongly_full_rank_rows(rows, opts);
            if (rank.ok) {
                node = CertNode{};
                node.kind = CertNode::Kind::Separation;
                for (const auto& [sigma, res] : rank.orbits) {
                    std::vector<Rational> n(res.witness.size());
                    for (std::size_t j = 0; j < n.size(); ++j) n[j] = from_double(res.witness[j]);
                    node.witnesses.emplace_back(sigma, std::move(n));
                }
                return true;
            }
        }
    }

    if (depth >= ctx.params.max_splits || k < 2) return false;

    // longest edge of the sub-simplex, ties to the lowest local pair
    int best_edge = -1;
    double best_len = -1;
    const int kk = static_cast<int>(k);
    for (int e = 0; e < edge_count(kk); ++e) {
        const auto [a, b] = edge_endpoints(kk, e);
        double s = 0;
        for (std::size_t r = 0; r < ctx.amb; ++r) {
            const double d = chart(r, static_cast<std::size_t>(a)) - chart(r, static_cast<std::size_t>(b));
            s += d * d;
        }
        const double len = std::sqrt(s);
        if (len > best_len + 1e-12) {
            best_len = len;
            best_edge = e;
        }
    }
    const auto [a, b] = edge_endpoints(kk, best_edge);
    node = CertNode{};
    node.kind = CertNode::Kind::Split;
    node.edge = best_edge;
    node.children.resize(2);
    for (int side = 0; side < 2; ++side) {
        Matrix<double> child = w;
        const std::size_t replaced = static_cast<std::size_t>(side == 0 ? b : a);
        for (std::size_t r = 0; r < k; ++r)
            child(r, replaced) = w(r, static_cast<std::size_t>(a)) + w(r, static_cast<std::size_t>(b));
        if (!test_node(ctx, child, depth + 1, node.children[static_cast<std::size_t>(side)])) return false;
    }
    return true;
}

}  // namespace

FaceTestResult test_face(const Decomposition& dec, const PolySystem& ps, const TildeP& tilde, const ConeGradients& grads,
                         const FaceKey& face, const CriterionParams& params) {
    Context ctx(dec, ps, params);
    ctx.k = face.size();
    ctx.amb = static_cast<std::size_t>(dec.ambient_dim());
    const std::size_t m = ps.polys().size();
    ctx.face_rays = to_double(face_matrix(dec, face));
    ctx.face_tilde = Matrix<double>(m, ctx.k);
    for (std::size_t c = 0; c < ctx.k; ++c)
        for (std::size_t i = 0; i < m; ++i) ctx.face_tilde(i, c) = tilde.float_values(face[c])[i];
    for (std::size_t i = 0; i < m; ++i) {
        ctx.poly_l1.push_back(ps[i].coefficient_l1());
        double s = 0;
        for (const auto& g : ps.gradients()[i]) s += g.coefficient_l1();
        ctx.grad_scale.push_back(s);
    }

    const auto& cof = dec.cofaces(face);
    ctx.coface_rows.assign(m, Matrix<double>(cof.size(), ctx.amb));
    for (std::size_t l = 0; l < cof.size(); ++l) {
        const auto it = grads.find(cof[l]);
        if (it == grads.end()) throw std::logic_error("test_face: missing gradient for cone " + std::to_string(cof[l]));
        for (std::size_t i = 0; i < m; ++i) {
            double norm = 0;
            for (std::size_t j = 0; j < ctx.amb; ++j) norm += it->second(i, j) * it->second(i, j);
            norm = std::sqrt(norm);
            if (!(norm > 0)) ctx.coface_rows_ok = false;
            for (std::size_t j = 0; j < ctx.amb; ++j) ctx.coface_rows[i](l, j) = norm > 0 ? it->second(i, j) / norm : 0.0;
        }
    }

    FaceTestResult result;
    result.cert.face = face;
    result.passed = test_node(ctx, Matrix<double>::identity(ctx.k), 0, result.cert.root);
    result.nodes = ctx.nodes;
    result.depth = result.passed ? tree_depth(result.cert.root) : ctx.max_depth;
    if (!result.passed) result.cert.root = CertNode{};
    return result;
}

FaceTestResult test_face(const Decomposition& dec, const PolySystem& ps, const TildeP& tilde, const FaceKey& face,
                         const CriterionParams& params) {
    const auto& cof = dec.cofaces(face);
    return test_face(dec, ps, tilde, cone_gradients(dec, tilde, cof), face, params);
}

}  // namespace isoplex
