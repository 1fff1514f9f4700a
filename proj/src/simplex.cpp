#include "isoplex/simplex.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "isoplex/exact_linalg.hpp"

namespace isoplex {

std::string face_key_string(const FaceKey& f) {
    std::string s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(f[i]);
    }
    return s;
}

namespace {

std::vector<double> unit_of(const std::vector<Rational>& ray) {
    std::vector<double> u(ray.size());
    double norm = 0;
    for (std::size_t i = 0; i < ray.size(); ++i) {
        u[i] = ray[i].get_d();
        norm += u[i] * u[i];
    }
    norm = std::sqrt(norm);
    for (auto& x : u) x /= norm;
    return u;
}

/// Calls fn(subset) for every nonempty subset of the sorted vertex list.
template <typename Fn>
void for_each_subset(const std::vector<VertexId>& verts, Fn&& fn) {
    const std::size_t k = verts.size();
    FaceKey sub;
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        sub.clear();
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (1u << i)) sub.push_back(verts[i]);
        fn(sub);
    }
}

double unit_distance(const Vertex& a, const Vertex& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.unit.size(); ++i) {
        const double d = a.unit[i] - b.unit[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Matrix<Rational> rays_matrix(const Decomposition& dec, const std::vector<VertexId>& verts) {
    Matrix<Rational> m(static_cast<std::size_t>(dec.ambient_dim()), verts.size());
    for (std::size_t c = 0; c < verts.size(); ++c) m.set_column(c, dec.vertex(verts[c]).ray);
    return m;
}

ValidationReport violation(std::string kind, std::string message, std::vector<ConeId> cones = {}) {
    ValidationReport r;
    r.ok = false;
    r.kind = std::move(kind);
    r.message = std::move(message);
    r.cones = std::move(cones);
    return r;
}

}  // namespace

Decomposition Decomposition::initial(int n) {
    if (n < 1) throw std::invalid_argument("initial decomposition needs n >= 1");
    return initial(Matrix<Rational>::identity(static_cast<std::size_t>(n + 1)));
}

Decomposition Decomposition::initial(const Matrix<Rational>& frame) {
    const int n = static_cast<int>(frame.rows()) - 1;
    if (n < 1 || frame.cols() != frame.rows()) throw std::invalid_argument("initial decomposition needs a square frame of size >= 2");
    if (exact::determinant(frame) == 0) throw std::invalid_argument("initial frame is singular");
    Decomposition dec;
    dec.ambient_dim_ = n + 1;
    for (int i = 0; i <= n; ++i) {
        std::vector<Rational> ray = frame.column(static_cast<std::size_t>(i));
        dec.add_vertex(ray);
        for (auto& x : ray) x = -x;
        dec.add_vertex(std::move(ray));
    }
    for (auto& v : dec.vertices_) v.antipode = v.id ^ 1;
    for (std::uint32_t pattern = 0; pattern < (1u << (n + 1)); ++pattern) {
        Cone c;
        for (int i = 0; i <= n; ++i) c.verts.push_back(2 * i + ((pattern >> i) & 1u ? 1 : 0));
        c.id = dec.next_cone_id_++;
        dec.add_cone(std::move(c));
    }
    return dec;
}

Decomposition Decomposition::from_parts(int ambient_dim, std::vector<std::pair<VertexId, std::vector<Rational>>> vertices,
                                        std::vector<Cone> cones) {
    if (ambient_dim < 2) throw std::invalid_argument("ambient dimension must be at least 2");
    Decomposition dec;
    dec.ambient_dim_ = ambient_dim;
    std::sort(vertices.begin(), vertices.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i].first != static_cast<VertexId>(i)) throw std::invalid_argument("vertex ids must be 0..V-1");
        if (vertices[i].second.size() != static_cast<std::size_t>(ambient_dim))
            throw std::invalid_argument("vertex " + std::to_string(i) + " has wrong dimension");
        bool nonzero = false;
        for (const auto& x : vertices[i].second) nonzero = nonzero || x != 0;
        if (!nonzero) throw std::invalid_argument("vertex " + std::to_string(i) + " is the zero ray");
        dec.add_vertex(std::move(vertices[i].second));
    }
    std::map<std::vector<Rational>, VertexId> by_ray;
    for (const auto& v : dec.vertices_) by_ray.emplace(v.ray, v.id);
    for (auto& v : dec.vertices_) {
        std::vector<Rational> neg = v.ray;
        for (auto& x : neg) x = -x;
        if (auto it = by_ray.find(neg); it != by_ray.end()) v.antipode = it->second;
    }
    for (auto& c : cones) {
        if (c.verts.size() != static_cast<std::size_t>(ambient_dim))
            throw std::invalid_argument("cone " + std::to_string(c.id) + " has wrong vertex count");
        std::sort(c.verts.begin(), c.verts.end());
        if (std::adjacent_find(c.verts.begin(), c.verts.end()) != c.verts.end())
            throw std::invalid_argument("cone " + std::to_string(c.id) + " repeats a vertex");
        for (VertexId v : c.verts)
            if (v < 0 || v >= static_cast<VertexId>(dec.vertices_.size()))
                throw std::invalid_argument("cone " + std::to_string(c.id) + " references unknown vertex");
        if (dec.cones_.count(c.id)) throw std::invalid_argument("duplicate cone id " + std::to_string(c.id));
        dec.next_cone_id_ = std::max(dec.next_cone_id_, c.id + 1);
        dec.add_cone(std::move(c));
    }
    return dec;
}

const Vertex& Decomposition::vertex(VertexId id) const {
    if (id < 0 || id >= static_cast<VertexId>(vertices_.size())) throw std::out_of_range("unknown vertex " + std::to_string(id));
    return vertices_[static_cast<std::size_t>(id)];
}

const Cone& Decomposition::cone(ConeId id) const {
    auto it = cones_.find(id);
    if (it == cones_.end()) throw std::out_of_range("unknown cone " + std::to_string(id));
    return it->second;
}

const std::vector<ConeId>& Decomposition::cofaces(const FaceKey& f) const {
    auto it = faces_.find(f);
    if (it == faces_.end()) throw std::out_of_range("unknown face {" + face_key_string(f) + "}");
    return it->second;
}

FaceKey Decomposition::antipode(const FaceKey& f) const {
    FaceKey out;
    for (VertexId v : f) {
        const VertexId a = vertex(v).antipode;
        if (a < 0) throw std::logic_error("vertex " + std::to_string(v) + " has no antipode");
        out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

VertexId Decomposition::add_vertex(std::vector<Rational> ray) {
    Vertex v;
    v.id = static_cast<VertexId>(vertices_.size());
    v.unit = unit_of(ray);
    v.ray = std::move(ray);
    vertices_.push_back(std::move(v));
    return vertices_.back().id;
}

void Decomposition::add_cone(Cone c) {
    for_each_subset(c.verts, [&](const FaceKey& sub) { faces_[sub].push_back(c.id); });
    cones_.emplace(c.id, std::move(c));
}

void Decomposition::remove_cone(ConeId id) {
    auto it = cones_.find(id);
    if (it == cones_.end()) return;
    for_each_subset(it->second.verts, [&](const FaceKey& sub) {
        auto fit = faces_.find(sub);
        if (fit == faces_.end()) return;
        auto& list = fit->second;
        list.erase(std::remove(list.begin(), list.end(), id), list.end());
        if (list.empty()) faces_.erase(fit);
    });
    cones_.erase(it);
}

RefineDelta Decomposition::split_edge(const FaceKey& edge, RayRule rule) {
    if (edge.size() != 2) throw std::invalid_argument("split_edge expects a 1-face");
    if (!has_face(edge)) throw std::out_of_range("edge {" + face_key_string(edge) + "} not found");
    const FaceKey mirror = antipode(edge);
    if (mirror == edge) throw std::logic_error("edge is its own antipode");

    RefineDelta delta;
    delta.edge = edge;
    std::vector<Rational> ray(static_cast<std::size_t>(ambient_dim_));
    for (std::size_t i = 0; i < ray.size(); ++i) ray[i] = vertex(edge[0]).ray[i] + vertex(edge[1]).ray[i];
    if (rule == RayRule::NearUnit) {
        double norm = 0;
        for (const auto& x : ray) norm += x.get_d() * x.get_d();
        Rational scale(Integer(static_cast<long>(std::lround(1024.0 / std::sqrt(norm)))), Integer(1024));
        scale.canonicalize();
        if (scale > 0)
            for (auto& x : ray) x *= scale;
    }
    std::vector<Rational> neg = ray;
    for (auto& x : neg) x = -x;
    delta.new_vertex = add_vertex(std::move(ray));
    delta.new_antipode = add_vertex(std::move(neg));
    vertices_[static_cast<std::size_t>(delta.new_vertex)].antipode = delta.new_antipode;
    vertices_[static_cast<std::size_t>(delta.new_antipode)].antipode = delta.new_vertex;

    std::set<FaceKey, FaceKeyLess> touched;
    for (const auto& [e, mid] : {std::pair{edge, delta.new_vertex}, std::pair{mirror, delta.new_antipode}}) {
        const std::vector<ConeId> split = faces_.at(e);
        for (ConeId cid : split) {
            const Cone old = cones_.at(cid);
            for_each_subset(old.verts, [&](const FaceKey& sub) { touched.insert(sub); });
            remove_cone(cid);
            delta.removed_cones.push_back(cid);
            for (VertexId replaced : e) {
                Cone c;
                c.id = next_cone_id_++;
                c.verts = old.verts;
                std::replace(c.verts.begin(), c.verts.end(), replaced, mid);
                std::sort(c.verts.begin(), c.verts.end());
                delta.added_cones.push_back(c.id);
                add_cone(std::move(c));
            }
        }
    }
    std::set<FaceKey, FaceKeyLess> dirty;
    for (ConeId cid : delta.added_cones) for_each_subset(cones_.at(cid).verts, [&](const FaceKey& sub) { dirty.insert(sub); });
    delta.dirty_faces.assign(dirty.begin(), dirty.end());
    for (const auto& f : touched)
        if (!has_face(f)) delta.removed_faces.push_back(f);
    ++generation_;
    return delta;
}

std::string Decomposition::dump() const {
    std::ostringstream os;
    for (const auto& v : vertices_) {
        os << "v " << v.id;
        for (const auto& x : v.ray) os << ' ' << to_string(x);
        os << '\n';
    }
    for (const auto& [id, c] : cones_) {
        os << "c " << id;
        for (VertexId v : c.verts) os << ' ' << v;
        os << '\n';
    }
    return os.str();
}

Decomposition initial_decomposition(int n) { return Decomposition::initial(n); }

Matrix<Rational> generic_frame(int dim) {
    if (dim < 1) throw std::invalid_argument("generic_frame: bad dimension");
    const auto d = static_cast<std::size_t>(dim);
    Matrix<Rational> s(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            Rational v(static_cast<long>(i + 2 * j + 1), static_cast<long>(4 * (i + j) + 11));
            v.canonicalize();
            s(i, j) = v;
            s(j, i) = -v;
        }
    Matrix<Rational> minus = Matrix<Rational>::identity(d), plus = Matrix<Rational>::identity(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            minus(i, j) -= s(i, j);
            plus(i, j) += s(i, j);
        }
    // Q = (I - S)(I + S)^{-1}, i.e. Q (I + S) = I - S
    auto q = exact::solve_right(plus, minus);
    if (!q) throw std::logic_error("generic_frame: I + S is singular");
    return *q;
}

std::pair<Decomposition, RefineDelta> refine(const Decomposition& dec, const FaceKey& edge, RayRule rule) {
    Decomposition next = dec;
    RefineDelta delta = next.split_edge(edge, rule);
    return {std::move(next), std::move(delta)};
}

ValidationReport validate_exact(const Decomposition& dec) {
    const auto amb = static_cast<std::size_t>(dec.ambient_dim());
    for (const auto& v : dec.vertices()) {
        if (v.ray.size() != amb) return violation("vertex", "vertex " + std::to_string(v.id) + " has wrong dimension");
        if (std::all_of(v.ray.begin(), v.ray.end(), [](const Rational& x) { return x == 0; }))
            return violation("vertex", "vertex " + std::to_string(v.id) + " is the zero ray");
        if (v.antipode < 0 || v.antipode >= static_cast<VertexId>(dec.vertex_count()))
            return violation("antipode", "vertex " + std::to_string(v.id) + " has no antipode");
        const Vertex& a = dec.vertex(v.antipode);
        if (a.antipode != v.id) return violation("antipode", "antipode relation is not an involution at " + std::to_string(v.id));
        for (std::size_t i = 0; i < amb; ++i)
            if (a.ray[i] != -v.ray[i]) return violation("antipode", "vertex " + std::to_string(v.id) + " antipode ray mismatch");
    }

    std::map<FaceKey, std::vector<ConeId>, FaceKeyLess> expected;
    for (const auto& [id, c] : dec.cones()) {
        if (c.verts.size() != amb) return violation("rank", "cone has wrong vertex count", {id});
        if (exact::determinant(rays_matrix(dec, c.verts)) == 0)
            return violation("rank", "cone rays are linearly dependent", {id});
        const FaceKey mirror = dec.antipode(c.verts);
        auto it = dec.faces().find(mirror);
        if (it == dec.faces().end() || mirror.size() != amb || it->second.size() != 1)
            return violation("symmetry", "antipodal image of cone is not a cone", {id});
        for_each_subset(c.verts, [&](const FaceKey& sub) { expected[sub].push_back(id); });
    }
    if (expected != dec.faces()) return violation("faces", "face index does not match the cones");

    for (const auto& [face, cof] : dec.faces()) {
        if (face.size() + 1 != amb) continue;
        if (cof.size() != 2) return violation("manifold", "facet {" + face_key_string(face) + "} has " + std::to_string(cof.size()) + " cofaces", cof);
        int signs[2];
        for (int k = 0; k < 2; ++k) {
            const auto& verts = dec.cone(cof[static_cast<std::size_t>(k)]).verts;
            FaceKey ordered = face;
            for (VertexId v : verts)
                if (!std::binary_search(face.begin(), face.end(), v)) ordered.push_back(v);
            signs[k] = sign(exact::determinant(rays_matrix(dec, ordered)));
        }
        if (signs[0] == 0 || signs[0] == signs[1])
            return violation("orientation", "cones on facet {" + face_key_string(face) + "} lie on the same side", cof);
    }

    if (!dec.cones().empty()) {
        const auto& [first_id, first] = *dec.cones().begin();
        std::vector<Rational> probe(amb, Rational(0));
        for (VertexId v : first.verts)
            for (std::size_t i = 0; i < amb; ++i) probe[i] += dec.vertex(v).ray[i];
        for (const auto& [id, c] : dec.cones()) {
            if (id == first_id) continue;
            auto lambda = exact::solve_unique(rays_matrix(dec, c.verts), probe);
            if (lambda && std::all_of(lambda->begin(), lambda->end(), [](const Rational& x) { return x >= 0; }))
                return violation("cover", "interior point of one cone lies in another", {first_id, id});
        }
    }
    return {};
}

ValidationReport validate(const Decomposition& dec, const ValidateOptions& opts) {
    if (auto r = validate_exact(dec); !r) return r;

    const auto amb = static_cast<std::size_t>(dec.ambient_dim());
    std::vector<std::pair<ConeId, Eigen::PartialPivLU<Eigen::MatrixXd>>> lus;
    for (const auto& [id, c] : dec.cones()) {
        Eigen::MatrixXd m(amb, amb);
        for (std::size_t col = 0; col < amb; ++col)
            for (std::size_t r = 0; r < amb; ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = dec.vertex(c.verts[col]).ray[r].get_d();
        lus.emplace_back(id, m.partialPivLu());
    }

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal;
    for (int s = 0; s < opts.random_samples; ++s) {
        Eigen::VectorXd u(amb);
        for (std::size_t i = 0; i < amb; ++i) u(static_cast<Eigen::Index>(i)) = normal(rng);
        u.normalize();
        std::vector<Rational> exact_u(amb);
        for (std::size_t i = 0; i < amb; ++i) exact_u[i] = from_double(u(static_cast<Eigen::Index>(i)));
        int inside = 0, containing = 0;
        std::vector<ConeId> hits;
        for (const auto& [id, lu] : lus) {
            const Eigen::VectorXd lambda = lu.solve(u);
            if (lambda.minCoeff() < -1e-9) continue;
            const auto exact_lambda = exact::solve_unique(rays_matrix(dec, dec.cone(id).verts), exact_u);
            if (!exact_lambda) continue;
            bool nonneg = true, positive = true;
            for (const auto& x : *exact_lambda) {
                nonneg = nonneg && x >= 0;
                positive = positive && x > 0;
            }
            if (nonneg) {
                ++containing;
                hits.push_back(id);
            }
            if (positive) ++inside;
        }
        if (containing == 0) return violation("cover", "random direction #" + std::to_string(s) + " is not covered");
        if (inside > 1) return violation("cover", "random direction #" + std::to_string(s) + " is interior to several cones", hits);
    }
    return {};
}

Matrix<Rational> face_matrix(const Decomposition& dec, const FaceKey& face) {
    if (!dec.has_face(face)) throw std::out_of_range("unknown face {" + face_key_string(face) + "}");
    return rays_matrix(dec, face);
}

FaceKey choose_refinement_edge(const Decomposition& dec, const FaceKey& failed_face) {
    std::vector<FaceKey> groups;
    if (failed_face.size() >= 2) {
        groups.push_back(failed_face);
    } else {
        for (ConeId c : dec.cofaces(failed_face)) groups.push_back(dec.cone(c).verts);
    }
    FaceKey best;
    double best_len = -1;
    for (const auto& g : groups)
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = i + 1; j < g.size(); ++j) {
                const double len = unit_distance(dec.vertex(g[i]), dec.vertex(g[j]));
                const FaceKey pair{g[i], g[j]};
                if (len > best_len + 1e-12 || (std::abs(len - best_len) <= 1e-12 && pair < best)) {
                    best_len = std::max(len, best_len);
                    best = pair;
                }
            }
    if (best.empty()) throw std::logic_error("no edge to refine");
    return best;
}

std::vector<std::pair<FaceKey, std::vector<ConeId>>> faces_iter(const Decomposition& dec) {
    return {dec.faces().begin(), dec.faces().end()};
}

double max_cone_diameter(const Decomposition& dec) {
    double best = 0;
    for (const auto& [id, c] : dec.cones())
        for (std::size_t i = 0; i < c.verts.size(); ++i)
            for (std::size_t j = i + 1; j < c.verts.size(); ++j) {
                const auto& a = dec.vertex(c.verts[i]).unit;
                const auto& b = dec.vertex(c.verts[j]).unit;
                double dot = 0;
                for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
                best = std::max(best, std::acos(std::clamp(dot, -1.0, 1.0)));
            }
    return best;
}

}  // namespace isoplex
