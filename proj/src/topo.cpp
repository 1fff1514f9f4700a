#include "isoplex/topo.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "isoplex/exact_linalg.hpp"

namespace isoplex {

std::vector<std::size_t> PLCellComplex::cell_counts() const {
    std::vector<std::size_t> out(static_cast<std::size_t>(std::max(top_dim(), 0) + 1), 0);
    for (const auto& c : cells) {
        if (static_cast<std::size_t>(c.dim) >= out.size()) out.resize(static_cast<std::size_t>(c.dim) + 1, 0);
        ++out[static_cast<std::size_t>(c.dim)];
    }
    return out;
}

namespace {

template <typename Fn>
void run_indexed(std::size_t count, int threads, Fn&& fn) {
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic) num_threads(threads > 0 ? threads : omp_get_max_threads())
    for (long i = 0; i < n; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(isoplex_topo_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

FaceKey subset_of(const FaceKey& f, unsigned mask) {
    FaceKey out;
    for (std::size_t j = 0; j < f.size(); ++j)
        if (mask >> j & 1u) out.push_back(f[j]);
    return out;
}

Matrix<Rational> values_matrix(const TildeP& tilde, const FaceKey& f, std::size_t m) {
    Matrix<Rational> t(m, f.size());
    for (std::size_t c = 0; c < f.size(); ++c)
        for (std::size_t i = 0; i < m; ++i) t(i, c) = tilde.values(f[c])[i];
    return t;
}

}  // namespace

PLCellComplex extract(const Decomposition& dec, const TildeP& tilde, int threads) {
    PLCellComplex cc;
    cc.ambient_dim = dec.ambient_dim();
    if (dec.vertex_count() == 0) return cc;
    const std::size_t m = tilde.values(0).size();
    cc.m = static_cast<int>(m);

    std::vector<FaceKey> faces;
    for (const auto& [f, cof] : dec.faces()) faces.push_back(f);
    if (faces.empty()) return cc;
    if (faces.front().size() > 8 * sizeof(unsigned) - 1 || dec.ambient_dim() > 24)
        throw std::invalid_argument("extract: dimension too large");

    // 0-cells: faces with at most m + 1 vertices where the zero set is a single interior point
    std::vector<std::optional<std::vector<Rational>>> points(faces.size());
    run_indexed(faces.size(), threads, [&](std::size_t idx) {
        const FaceKey& g = faces[idx];
        if (g.size() > m + 1) return;
        Matrix<Rational> a(m + 1, g.size());
        const Matrix<Rational> t = values_matrix(tilde, g, m);
        for (std::size_t c = 0; c < g.size(); ++c) {
            for (std::size_t i = 0; i < m; ++i) a(i, c) = t(i, c);
            a(m, c) = 1;
        }
        std::vector<Rational> rhs(m + 1, Rational(0));
        rhs[m] = 1;
        const auto lambda = exact::solve_unique(std::move(a), rhs);
        if (!lambda) return;
        for (const auto& l : *lambda)
            if (sign(l) <= 0) return;
        std::vector<Rational> x(static_cast<std::size_t>(dec.ambient_dim()), Rational(0));
        for (std::size_t c = 0; c < g.size(); ++c) {
            const auto& ray = dec.vertex(g[c]).ray;
            for (std::size_t r = 0; r < x.size(); ++r) x[r] += (*lambda)[c] * ray[r];
        }
        points[idx] = std::move(x);
    });

    std::map<FaceKey, std::size_t, FaceKeyLess> zero_cells;
    for (std::size_t i = 0; i < faces.size(); ++i)
        if (points[i]) zero_cells.emplace(faces[i], i);

    // Higher cells: the zero set meets relint(F) iff the supports of its vertices cover F, since the
    // closed piece inside F is the convex hull of those vertices.
    std::vector<int> dims(faces.size(), -1);
    run_indexed(faces.size(), threads, [&](std::size_t idx) {
        const FaceKey& f = faces[idx];
        if (points[idx]) {
            dims[idx] = 0;
            return;
        }
        if (f.size() < 2) return;
        const unsigned full = (1u << f.size()) - 1;
        unsigned covered = 0;
        for (unsigned mask = 1; mask < full; ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) > m + 1) continue;
            if (zero_cells.count(subset_of(f, mask))) covered |= mask;
        }
        if (covered != full) return;
        const std::size_t r = exact::rank(values_matrix(tilde, f, m));
        dims[idx] = static_cast<int>(f.size() - 1 - r);
    });

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < faces.size(); ++i)
        if (dims[i] >= 0) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dims[a] != dims[b]) return dims[a] < dims[b];
        return FaceKeyLess{}(faces[a], faces[b]);
    });
    std::map<FaceKey, int, FaceKeyLess> index;
    for (std::size_t i = 0; i < order.size(); ++i) {
        PLCell cell;
        cell.support = faces[order[i]];
        cell.dim = dims[order[i]];
        if (points[order[i]]) cell.point = std::move(*points[order[i]]);
        index.emplace(cell.support, static_cast<int>(i));
        cc.cells.push_back(std::move(cell));
    }

    for (auto& cell : cc.cells) {
        if (cell.dim == 0) continue;
        const unsigned full = (1u << cell.support.size()) - 1;
        for (unsigned mask = 1; mask < full; ++mask) {
            const auto it = index.find(subset_of(cell.support, mask));
            if (it != index.end() && cc.cells[static_cast<std::size_t>(it->second)].dim == cell.dim - 1)
                cell.boundary.push_back(it->second);
        }
        std::sort(cell.boundary.begin(), cell.boundary.end());
    }
    return cc;
}

PLCellComplex projective_quotient(const Decomposition& dec, const PLCellComplex& cc) {
    if (cc.projective) throw std::invalid_argument("projective_quotient: complex is already a quotient");
    std::map<FaceKey, int, FaceKeyLess> index;
    for (std::size_t i = 0; i < cc.cells.size(); ++i) index.emplace(cc.cells[i].support, static_cast<int>(i));

    std::vector<int> rep(cc.cells.size(), -1);
    for (std::size_t i = 0; i < cc.cells.size(); ++i) {
        const FaceKey mirror = dec.antipode(cc.cells[i].support);
        const auto it = index.find(mirror);
        if (it == index.end() || cc.cells[static_cast<std::size_t>(it->second)].dim != cc.cells[i].dim)
            throw std::invalid_argument("projective_quotient: cell {" + face_key_string(cc.cells[i].support) + "} has no antipodal partner");
        rep[i] = FaceKeyLess{}(cc.cells[i].support, mirror) ? static_cast<int>(i) : it->second;
    }

    PLCellComplex out;
    out.ambient_dim = cc.ambient_dim;
    out.m = cc.m;
    out.projective = true;
    std::vector<int> renum(cc.cells.size(), -1);
    for (std::size_t i = 0; i < cc.cells.size(); ++i) {
        if (rep[i] != static_cast<int>(i)) continue;
        renum[i] = static_cast<int>(out.cells.size());
        out.cells.push_back(cc.cells[i]);
    }
    for (auto& cell : out.cells) {
        for (int& b : cell.boundary) b = renum[static_cast<std::size_t>(rep[static_cast<std::size_t>(b)])];
        std::sort(cell.boundary.begin(), cell.boundary.end());
    }
    return out;
}

std::vector<int> component_labels(const PLCellComplex& cc) {
    std::vector<int> parent(cc.cells.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (std::size_t i = 0; i < cc.cells.size(); ++i)
        for (int b : cc.cells[i].boundary) {
            const int ra = find(static_cast<int>(i)), rb = find(b);
            if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
        }
    std::vector<int> labels(cc.cells.size());
    std::map<int, int> by_root;
    for (std::size_t i = 0; i < cc.cells.size(); ++i) {
        const int r = find(static_cast<int>(i));
        const auto [it, fresh] = by_root.emplace(r, static_cast<int>(by_root.size()));
        labels[i] = it->second;
    }
    return labels;
}

int components(const PLCellComplex& cc) {
    const auto labels = component_labels(cc);
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

namespace {

using Bits = std::vector<std::uint64_t>;

/// Rank over GF(2) of the given columns.
std::size_t gf2_rank(std::vector<Bits> cols) {
    std::map<std::size_t, Bits> pivots;  // pivot bit -> reduced column
    std::size_t rank = 0;
    for (auto& col : cols) {
        for (;;) {
            std::size_t top = SIZE_MAX;
            for (std::size_t w = col.size(); w-- > 0;)
                if (col[w]) {
                    top = w * 64 + (63 - static_cast<std::size_t>(__builtin_clzll(col[w])));
                    break;
                }
            if (top == SIZE_MAX) break;
            const auto it = pivots.find(top);
            if (it == pivots.end()) {
                pivots.emplace(top, std::move(col));
                ++rank;
                break;
            }
            for (std::size_t w = 0; w < col.size(); ++w) col[w] ^= it->second[w];
        }
    }
    return rank;
}

}  // namespace

std::vector<int> betti_z2(const PLCellComplex& cc, const std::vector<int>& subset) {
    std::vector<int> chosen = subset;
    if (chosen.empty()) {
        chosen.resize(cc.cells.size());
        std::iota(chosen.begin(), chosen.end(), 0);
    }
    int top = std::max(cc.top_dim(), 0);
    for (int c : chosen) top = std::max(top, cc.cells[static_cast<std::size_t>(c)].dim);
    const std::size_t levels = static_cast<std::size_t>(top) + 1;

    std::vector<std::vector<int>> by_dim(levels);
    std::vector<long> position(cc.cells.size(), -1);
    for (int c : chosen) {
        const auto& cell = cc.cells[static_cast<std::size_t>(c)];
        position[static_cast<std::size_t>(c)] = static_cast<long>(by_dim[static_cast<std::size_t>(cell.dim)].size());
        by_dim[static_cast<std::size_t>(cell.dim)].push_back(c);
    }

    // rank of the boundary map from dimension k to k - 1
    std::vector<std::size_t> ranks(levels + 1, 0);
    for (std::size_t k = 1; k < levels; ++k) {
        const std::size_t rows = by_dim[k - 1].size();
        std::vector<Bits> cols;
        for (int c : by_dim[k]) {
            Bits col((rows + 63) / 64, 0);
            for (int b : cc.cells[static_cast<std::size_t>(c)].boundary) {
                const long p = position[static_cast<std::size_t>(b)];
                if (p < 0) continue;
                col[static_cast<std::size_t>(p) / 64] ^= std::uint64_t{1} << (static_cast<std::size_t>(p) % 64);
            }
            cols.push_back(std::move(col));
        }
        ranks[k] = gf2_rank(std::move(cols));
    }
    std::vector<int> betti(levels);
    for (std::size_t k = 0; k < levels; ++k)
        betti[k] = static_cast<int>(by_dim[k].size() - ranks[k] - ranks[k + 1]);
    return betti;
}

TopoReport analyze(const PLCellComplex& cc) {
    TopoReport r;
    r.projective = cc.projective;
    const auto labels = component_labels(cc);
    r.components = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    r.betti = betti_z2(cc);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(r.components));
    for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels[i])].push_back(static_cast<int>(i));
    for (const auto& mem : members) r.component_betti.push_back(betti_z2(cc, mem));
    r.cell_counts = cc.cell_counts();
    for (std::size_t k = 0; k < r.cell_counts.size(); ++k)
        r.euler_cells += (k % 2 ? -1 : 1) * static_cast<long>(r.cell_counts[k]);
    for (std::size_t k = 0; k < r.betti.size(); ++k) r.euler_betti += (k % 2 ? -1 : 1) * static_cast<long>(r.betti[k]);
    return r;
}

bool is_pseudo_manifold(const PLCellComplex& cc) {
    const int top = cc.top_dim();
    if (top < 1) return true;
    std::vector<int> incidence(cc.cells.size(), 0);
    for (const auto& c : cc.cells) {
        if (c.dim > top) return false;
        if (c.dim == top)
            for (int b : c.boundary) ++incidence[static_cast<std::size_t>(b)];
    }
    for (std::size_t i = 0; i < cc.cells.size(); ++i)
        if (cc.cells[i].dim == top - 1 && incidence[i] != 2) return false;
    return true;
}

std::vector<int> polygon_vertices(const PLCellComplex& cc, int cell) {
    const auto& c = cc.cells.at(static_cast<std::size_t>(cell));
    if (c.dim != 2) throw std::invalid_argument("polygon_vertices: not a 2-cell");
    std::vector<std::pair<int, int>> edges;
    for (int e : c.boundary) {
        const auto& b = cc.cells[static_cast<std::size_t>(e)].boundary;
        if (b.size() != 2) throw std::logic_error("polygon_vertices: edge without two endpoints");
        edges.emplace_back(b[0], b[1]);
    }
    if (edges.size() < 3) throw std::logic_error("polygon_vertices: fewer than three edges");
    std::vector<int> cycle{edges[0].first, edges[0].second};
    std::vector<char> used(edges.size(), 0);
    used[0] = 1;
    while (cycle.size() < edges.size()) {
        bool advanced = false;
        for (std::size_t i = 0; i < edges.size() && !advanced; ++i) {
            if (used[i]) continue;
            const int tail = cycle.back();
            if (edges[i].first == tail || edges[i].second == tail) {
                used[i] = 1;
                cycle.push_back(edges[i].first == tail ? edges[i].second : edges[i].first);
                advanced = true;
            }
        }
        if (!advanced) throw std::logic_error("polygon_vertices: boundary is not a cycle");
    }
    return cycle;
}

void export_off(const PLCellComplex& cc, const std::string& path) {
    const int top = cc.top_dim();
    if (top != 1 && top != 2) throw std::invalid_argument("export_off: only curves and surfaces are supported");

    std::vector<int> vertex_index(cc.cells.size(), -1);
    std::vector<int> verts;
    for (std::size_t i = 0; i < cc.cells.size(); ++i)
        if (cc.cells[i].dim == 0) {
            vertex_index[i] = static_cast<int>(verts.size());
            verts.push_back(static_cast<int>(i));
        }
    std::vector<std::vector<int>> polygons;
    if (top == 2)
        for (std::size_t i = 0; i < cc.cells.size(); ++i)
            if (cc.cells[i].dim == 2) {
                auto cyc = polygon_vertices(cc, static_cast<int>(i));
                for (int& v : cyc) v = vertex_index[static_cast<std::size_t>(v)];
                polygons.push_back(std::move(cyc));
            }

    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    if (cc.ambient_dim == 3)
        os << "OFF\n";
    else if (cc.ambient_dim == 4)
        os << "4OFF\n";
    else
        os << "nOFF\n" << cc.ambient_dim << '\n';
    os << verts.size() << ' ' << polygons.size() << " 0\n";
    os.precision(17);
    for (int v : verts) {
        const auto& p = cc.cells[static_cast<std::size_t>(v)].point;
        double norm = 0;
        std::vector<double> x(p.size());
        for (std::size_t r = 0; r < p.size(); ++r) {
            x[r] = to_double(p[r]);
            norm += x[r] * x[r];
        }
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < x.size(); ++r) os << (r ? " " : "") << x[r] / norm;
        os << '\n';
    }
    for (const auto& poly : polygons) {
        os << poly.size();
        for (int v : poly) os << ' ' << v;
        os << '\n';
    }
    if (!os) throw std::runtime_error("failed writing " + path);

    if (top == 1) {
        std::ofstream es(path + ".edges");
        if (!es) throw std::runtime_error("cannot write " + path + ".edges");
        for (const auto& c : cc.cells)
            if (c.dim == 1 && c.boundary.size() == 2)
                es << "e " << vertex_index[static_cast<std::size_t>(c.boundary[0])] << ' '
                   << vertex_index[static_cast<std::size_t>(c.boundary[1])] << '\n';
        if (!es) throw std::runtime_error("failed writing " + path + ".edges");
    }
}

}  // namespace isoplex
