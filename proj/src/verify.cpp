#include "isoplex/verify.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cctype>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "isoplex/bernstein.hpp"
#include "isoplex/dense_poly.hpp"
#include "isoplex/minnorm.hpp"

namespace isoplex {

CertificateFormatError::CertificateFormatError(int line, const std::string& msg)
    : std::runtime_error("certificate line " + std::to_string(line) + ": " + msg), line_(line) {}

Certificate make_certificate(const PolySystem& ps, const Decomposition& dec, const TildeP& tilde,
                             const std::vector<FaceCertificate>& faces) {
    Certificate c;
    c.nvars = ps.nvars();
    c.m = ps.size();
    c.degrees = ps.degrees();
    for (const auto& v : dec.vertices()) c.vertices.emplace_back(v.id, v.ray);
    for (const auto& [id, cone] : dec.cones()) c.cones.push_back(cone);
    for (const auto& v : dec.vertices()) c.tilde.emplace_back(v.id, tilde.values(v.id));
    c.faces = faces;
    return c;
}

namespace {

void write_rationals(std::ostream& os, const std::vector<Rational>& xs) {
    for (const auto& x : xs) os << ' ' << to_string(x);
}

void write_tree_to(std::ostream& os, const CertNode& n) {
    switch (n.kind) {
        case CertNode::Kind::Sign:
            os << "(sign " << n.poly << ' ' << (n.sign > 0 ? '+' : '-') << ')';
            break;
        case CertNode::Kind::Separation:
            os << "(sep";
            for (const auto& [sigma, w] : n.witnesses) {
                os << " (" << sign_string(sigma);
                write_rationals(os, w);
                os << ')';
            }
            os << ')';
            break;
        case CertNode::Kind::Split:
            os << "(split " << n.edge;
            for (const auto& c : n.children) {
                os << ' ';
                write_tree_to(os, c);
            }
            os << ')';
            break;
    }
}

}  // namespace

std::string write_tree(const CertNode& node) {
    std::ostringstream os;
    write_tree_to(os, node);
    return os.str();
}

std::string write_certificate(const Certificate& cert) {
    std::ostringstream os;
    os << "# isoplex certificate\n[header]\nnvars " << cert.nvars << "\nm " << cert.m << "\ndegrees";
    for (int d : cert.degrees) os << ' ' << d;
    os << "\n[vertices]\n";
    for (const auto& [id, ray] : cert.vertices) {
        os << "v " << id;
        write_rationals(os, ray);
        os << '\n';
    }
    os << "[cones]\n";
    for (const auto& c : cert.cones) {
        os << "c " << c.id;
        for (VertexId v : c.verts) os << ' ' << v;
        os << '\n';
    }
    os << "[tilde]\n";
    for (const auto& [id, vals] : cert.tilde) {
        os << "t " << id;
        write_rationals(os, vals);
        os << '\n';
    }
    for (const auto& f : cert.faces) {
        os << "[face " << face_key_string(f.face) << "]\n";
        write_tree_to(os, f.root);
        os << '\n';
    }
    return os.str();
}

namespace {

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        const std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

long parse_int(const std::string& tok, int line) {
    if (tok.empty()) throw CertificateFormatError(line, "expected an integer");
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(tok, &pos);
    } catch (const std::exception&) {
        throw CertificateFormatError(line, "bad integer '" + tok + "'");
    }
    if (pos != tok.size()) throw CertificateFormatError(line, "bad integer '" + tok + "'");
    return v;
}

Rational parse_rat(const std::string& tok, int line) {
    try {
        return parse_rational(tok);
    } catch (const std::exception&) {
        throw CertificateFormatError(line, "bad rational '" + tok + "'");
    }
}

class TreeParser {
public:
    TreeParser(const std::string& text, int line) : line_(line) {
        std::string cur;
        for (char ch : text) {
            if (ch == '(' || ch == ')' || std::isspace(static_cast<unsigned char>(ch))) {
                if (!cur.empty()) toks_.push_back(std::move(cur));
                cur.clear();
                if (ch == '(' || ch == ')') toks_.emplace_back(1, ch);
            } else {
                cur += ch;
            }
        }
        if (!cur.empty()) toks_.push_back(std::move(cur));
    }

    CertNode parse() {
        CertNode n = node(0);
        if (pos_ != toks_.size()) fail("trailing tokens after tree");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw CertificateFormatError(line_, msg); }

    const std::string& next() {
        if (pos_ >= toks_.size()) fail("unexpected end of tree");
        return toks_[pos_++];
    }
    void expect(const char* tok) {
        if (next() != tok) fail(std::string("expected '") + tok + "'");
    }
    bool peek_is(const char* tok) const { return pos_ < toks_.size() && toks_[pos_] == tok; }

    CertNode node(int depth) {
        if (depth > 200) fail("tree nesting too deep");
        expect("(");
        const std::string kind = next();
        CertNode n;
        if (kind == "split") {
            n.kind = CertNode::Kind::Split;
            n.edge = static_cast<int>(parse_int(next(), line_));
            n.children.push_back(node(depth + 1));
            n.children.push_back(node(depth + 1));
        } else if (kind == "sign") {
            n.kind = CertNode::Kind::Sign;
            n.poly = static_cast<int>(parse_int(next(), line_));
            const std::string s = next();
            if (s != "+" && s != "-") fail("sign must be + or -");
            n.sign = s == "+" ? 1 : -1;
        } else if (kind == "sep") {
            n.kind = CertNode::Kind::Separation;
            while (peek_is("(")) {
                expect("(");
                SignVector sigma;
                try {
                    sigma = parse_sign_string(next());
                } catch (const std::exception& e) {
                    fail(e.what());
                }
                std::vector<Rational> w;
                while (!peek_is(")")) w.push_back(parse_rat(next(), line_));
                expect(")");
                n.witnesses.emplace_back(std::move(sigma), std::move(w));
            }
            if (n.witnesses.empty()) fail("sep without witnesses");
        } else {
            fail("unknown node kind '" + kind + "'");
        }
        expect(")");
        return n;
    }

    std::vector<std::string> toks_;
    std::size_t pos_ = 0;
    int line_;
};

}  // namespace

Certificate parse_certificate(std::string_view text) {
    Certificate cert;
    enum class Section { None, Header, Vertices, Cones, Tilde, Face } section = Section::None;
    bool seen_header = false;
    std::string tree_text;
    int tree_line = 0;
    FaceKey current_face;
    bool have_nvars = false, have_m = false, have_degrees = false;

    auto flush_face = [&](int line) {
        if (section != Section::Face) return;
        if (tree_text.find_first_not_of(" \t") == std::string::npos) throw CertificateFormatError(line, "face without a tree");
        cert.faces.push_back({current_face, TreeParser(tree_text, tree_line).parse()});
        tree_text.clear();
    };

    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto toks = split_ws(line);
        if (toks.empty()) continue;

        if (toks.front().front() == '[') {
            flush_face(line_no);
            std::string head(line);
            const auto open = head.find('['), close = head.find(']');
            if (close == std::string::npos) throw CertificateFormatError(line_no, "unterminated section header");
            const auto inner = split_ws(std::string_view(head).substr(open + 1, close - open - 1));
            if (inner.empty()) throw CertificateFormatError(line_no, "empty section header");
            const std::string& name = inner.front();
            if (name == "header") {
                if (seen_header) throw CertificateFormatError(line_no, "duplicate [header]");
                seen_header = true;
                section = Section::Header;
            } else if (name == "vertices") {
                section = Section::Vertices;
            } else if (name == "cones") {
                section = Section::Cones;
            } else if (name == "tilde") {
                section = Section::Tilde;
            } else if (name == "face") {
                section = Section::Face;
                current_face.clear();
                for (std::size_t i = 1; i < inner.size(); ++i) current_face.push_back(static_cast<VertexId>(parse_int(inner[i], line_no)));
                if (current_face.empty()) throw CertificateFormatError(line_no, "face without vertices");
                tree_line = line_no + 1;
            } else {
                throw CertificateFormatError(line_no, "unknown section [" + name + "]");
            }
            continue;
        }

        switch (section) {
            case Section::None:
                throw CertificateFormatError(line_no, "content before the first section");
            case Section::Header:
                if (toks[0] == "nvars" && toks.size() == 2) {
                    cert.nvars = static_cast<int>(parse_int(toks[1], line_no));
                    have_nvars = true;
                } else if (toks[0] == "m" && toks.size() == 2) {
                    cert.m = static_cast<int>(parse_int(toks[1], line_no));
                    have_m = true;
                } else if (toks[0] == "degrees") {
                    for (std::size_t i = 1; i < toks.size(); ++i) cert.degrees.push_back(static_cast<int>(parse_int(toks[i], line_no)));
                    have_degrees = true;
                } else {
                    throw CertificateFormatError(line_no, "unknown header field '" + toks[0] + "'");
                }
                break;
            case Section::Vertices: {
                if (toks[0] != "v" || toks.size() < 3) throw CertificateFormatError(line_no, "expected 'v <id> <coords>'");
                std::vector<Rational> ray;
                for (std::size_t i = 2; i < toks.size(); ++i) ray.push_back(parse_rat(toks[i], line_no));
                cert.vertices.emplace_back(static_cast<VertexId>(parse_int(toks[1], line_no)), std::move(ray));
                break;
            }
            case Section::Cones: {
                if (toks[0] != "c" || toks.size() < 3) throw CertificateFormatError(line_no, "expected 'c <id> <vertex ids>'");
                Cone c;
                c.id = static_cast<ConeId>(parse_int(toks[1], line_no));
                for (std::size_t i = 2; i < toks.size(); ++i) c.verts.push_back(static_cast<VertexId>(parse_int(toks[i], line_no)));
                cert.cones.push_back(std::move(c));
                break;
            }
            case Section::Tilde: {
                if (toks[0] != "t" || toks.size() < 3) throw CertificateFormatError(line_no, "expected 't <id> <values>'");
                std::vector<Rational> vals;
                for (std::size_t i = 2; i < toks.size(); ++i) vals.push_back(parse_rat(toks[i], line_no));
                cert.tilde.emplace_back(static_cast<VertexId>(parse_int(toks[1], line_no)), std::move(vals));
                break;
            }
            case Section::Face:
                tree_text += ' ';
                tree_text += line;
                break;
        }
    }
    flush_face(line_no);
    if (!have_nvars || !have_m || !have_degrees) throw CertificateFormatError(line_no, "incomplete [header]");
    return cert;
}

Certificate read_certificate_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_certificate(ss.str());
}

std::pair<Decomposition, TildeP> rebuild(const Certificate& cert) {
    Decomposition dec = Decomposition::from_parts(cert.nvars, cert.vertices, cert.cones);
    std::vector<std::vector<Rational>> values(dec.vertex_count());
    for (const auto& [id, vals] : cert.tilde) {
        if (id < 0 || id >= static_cast<VertexId>(values.size()) || !values[static_cast<std::size_t>(id)].empty())
            throw std::invalid_argument("bad tilde entry for vertex " + std::to_string(id));
        values[static_cast<std::size_t>(id)] = vals;
    }
    for (const auto& v : values)
        if (v.size() != static_cast<std::size_t>(cert.m)) throw std::invalid_argument("missing or short tilde entry");
    return {std::move(dec), TildeP::from_values(std::move(values))};
}

namespace {

struct Failure {
    std::string path;
    std::string reason;
};

/// Exact data shared by all face replays.
struct ExactSystem {
    std::vector<int> degrees;
    std::vector<SparseTerms<Integer>> terms;                   // per poly, positive integer multiple
    std::vector<std::vector<SparseTerms<Integer>>> gradients;  // [i][j], from the integer terms
    int max_degree = 0;
};

ExactSystem exact_system(const PolySystem& ps) {
    ExactSystem s;
    for (const auto& p : ps.polys()) {
        s.degrees.push_back(p.degree());
        s.max_degree = std::max(s.max_degree, p.degree());
        s.terms.push_back(p.integer_terms());
        std::vector<SparseTerms<Integer>> grads;
        for (int j = 0; j < p.nvars(); ++j) {
            std::map<MultiIndex, Integer> acc;
            for (const auto& [alpha, c] : p.integer_terms()) {
                const int e = alpha[static_cast<std::size_t>(j)];
                if (e == 0) continue;
                MultiIndex beta = alpha;
                --beta[static_cast<std::size_t>(j)];
                acc[beta] += c * e;
            }
            SparseTerms<Integer> g;
            for (auto& [beta, c] : acc)
                if (c != 0) g.emplace_back(beta, std::move(c));
            grads.push_back(std::move(g));
        }
        s.gradients.push_back(std::move(grads));
    }
    return s;
}

struct FaceReplay {
    explicit FaceReplay(const ExactSystem& s) : sys(s) {}

    const ExactSystem& sys;
    int ambient = 0;
    std::size_t k = 0;
    Matrix<Rational> rays;   // ambient x k
    Matrix<Rational> tilde;  // m x k
    std::vector<const Matrix<Rational>*> coface_grads;
    std::size_t nodes = 0;

    std::optional<Failure> replay(const CertNode& node, const Matrix<Integer>& w, const std::string& path, int depth) {
        ++nodes;
        if (depth > 128) return Failure{path, "tree deeper than 128 levels"};
        const std::size_t m = sys.terms.size();

        if (node.kind == CertNode::Kind::Split) {
            const int kk = static_cast<int>(k);
            if (node.edge < 0 || node.edge >= edge_count(kk)) return Failure{path, "split edge index out of range"};
            if (node.children.size() != 2) return Failure{path, "split needs two children"};
            const auto [a, b] = edge_endpoints(kk, node.edge);
            for (int side = 0; side < 2; ++side) {
                Matrix<Integer> child = w;
                const std::size_t replaced = static_cast<std::size_t>(side == 0 ? b : a);
                for (std::size_t r = 0; r < k; ++r)
                    child(r, replaced) = w(r, static_cast<std::size_t>(a)) + w(r, static_cast<std::size_t>(b));
                if (auto f = replay(node.children[static_cast<std::size_t>(side)], child, path + "/" + std::to_string(side), depth + 1))
                    return f;
            }
            return std::nullopt;
        }

        // integer chart: each column of rays * w scaled to a primitive integer vector
        Matrix<Integer> chart(static_cast<std::size_t>(ambient), k);
        for (std::size_t c = 0; c < k; ++c) {
            std::vector<Rational> col(static_cast<std::size_t>(ambient), Rational(0));
            for (std::size_t r = 0; r < col.size(); ++r)
                for (std::size_t j = 0; j < k; ++j)
                    if (w(j, c) != 0) col[r] += rays(r, j) * w(j, c);
            const auto prim = primitive_integer_vector(col);
            for (std::size_t r = 0; r < col.size(); ++r) chart(r, c) = prim[r];
        }

        if (node.kind == CertNode::Kind::Sign) {
            if (node.poly < 0 || node.poly >= static_cast<int>(m)) return Failure{path, "sign leaf names an unknown polynomial"};
            if (node.sign != 1 && node.sign != -1) return Failure{path, "sign leaf has no sign"};
            const auto i = static_cast<std::size_t>(node.poly);
            const LinearPowers<Integer> powers(chart, sys.degrees[i]);
            const auto q = scaled_bernstein(substitute(sys.terms[i], sys.degrees[i], powers));
            for (std::size_t r = 0; r < q.size(); ++r)
                if (sign(q[r]) != node.sign) return Failure{path, "Bernstein coefficient " + std::to_string(r) + " of p" + std::to_string(i) + " lacks the claimed sign"};
            for (std::size_t c = 0; c < k; ++c) {
                Rational v = 0;
                for (std::size_t j = 0; j < k; ++j) v += tilde(i, j) * w(j, c);
                if (sign(v) != node.sign) return Failure{path, "interpolant value at chart vertex " + std::to_string(c) + " lacks the claimed sign"};
            }
            return std::nullopt;
        }

        // separation leaf
        const std::size_t orbits = std::size_t{1} << (m - 1);
        std::set<SignVector> seen;
        for (const auto& [sigma, n] : node.witnesses) {
            if (sigma.size() != m || sigma.front() != 1) return Failure{path, "malformed sign vector " + sign_string(sigma)};
            if (!seen.insert(sigma).second) return Failure{path, "duplicate sign vector " + sign_string(sigma)};
            if (n.size() != static_cast<std::size_t>(ambient)) return Failure{path, "witness has wrong length"};
        }
        if (seen.size() != orbits) return Failure{path, "missing sign vectors"};

        const LinearPowers<Integer> powers(chart, std::max(sys.max_degree - 1, 0));
        std::vector<std::vector<std::vector<Integer>>> rows(m);  // [i][rank][j]
        for (std::size_t i = 0; i < m; ++i) {
            const int deg = sys.degrees[i] - 1;
            std::vector<std::vector<Integer>> comps;
            for (const auto& g : sys.gradients[i]) comps.push_back(scaled_bernstein(substitute(g, deg, powers)));
            rows[i].assign(comps.front().size(), std::vector<Integer>(comps.size()));
            for (std::size_t j = 0; j < comps.size(); ++j)
                for (std::size_t r = 0; r < comps[j].size(); ++r) rows[i][r][j] = comps[j][r];
        }
        for (const auto& [sigma, n] : node.witnesses) {
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t r = 0; r < rows[i].size(); ++r) {
                    Rational dot = 0;
                    for (std::size_t j = 0; j < n.size(); ++j) dot += n[j] * rows[i][r][j];
                    if (sign(dot) * sigma[i] <= 0)
                        return Failure{path, "witness " + sign_string(sigma) + " fails on gradient row " + std::to_string(r) + " of p" + std::to_string(i)};
                }
                for (std::size_t l = 0; l < coface_grads.size(); ++l) {
                    const auto& g = *coface_grads[l];
                    Rational dot = 0;
                    for (std::size_t j = 0; j < n.size(); ++j) dot += n[j] * g(i, j);
                    if (sign(dot) * sigma[i] <= 0)
                        return Failure{path, "witness " + sign_string(sigma) + " fails on interpolant gradient " + std::to_string(l) + " of p" + std::to_string(i)};
                }
            }
        }
        return std::nullopt;
    }
};

VerifyReport reject(VerifyReport r, std::string reason, FaceKey face = {}, std::string path = {}) {
    r.outcome = VerifyOutcome::Reject;
    r.reason = std::move(reason);
    r.face = std::move(face);
    r.path = std::move(path);
    return r;
}

}  // namespace

VerifyReport check_certificate(const PolySystem& ps, const Certificate& cert, int threads) {
    const auto start = std::chrono::steady_clock::now();
    VerifyReport report;
    auto finish = [&](VerifyReport r) {
        r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return r;
    };

    if (cert.nvars != ps.nvars() || cert.m != ps.size() || cert.degrees != ps.degrees())
        return finish(reject(report, "header does not match the polynomial system"));

    Decomposition dec;
    try {
        dec = Decomposition::from_parts(cert.nvars, cert.vertices, cert.cones);
    } catch (const std::exception& e) {
        return finish(reject(report, std::string("decomposition: ") + e.what()));
    }
    if (const auto v = validate_exact(dec); !v) return finish(reject(report, "decomposition " + v.kind + ": " + v.message));

    std::vector<std::vector<Rational>> values(dec.vertex_count());
    std::vector<char> have(dec.vertex_count(), 0);
    for (const auto& [id, vals] : cert.tilde) {
        if (id < 0 || id >= static_cast<VertexId>(dec.vertex_count())) return finish(reject(report, "tilde entry for unknown vertex " + std::to_string(id)));
        if (have[static_cast<std::size_t>(id)]) return finish(reject(report, "duplicate tilde entry for vertex " + std::to_string(id)));
        if (vals.size() != static_cast<std::size_t>(ps.size())) return finish(reject(report, "tilde entry of vertex " + std::to_string(id) + " has wrong length"));
        const auto& ray = dec.vertex(id).ray;
        for (std::size_t i = 0; i < vals.size(); ++i)
            if (ps[i].eval(std::span<const Rational>(ray)) != vals[i])
                return finish(reject(report, "tilde value of vertex " + std::to_string(id) + " differs from p" + std::to_string(i)));
        have[static_cast<std::size_t>(id)] = 1;
        values[static_cast<std::size_t>(id)] = vals;
    }
    for (std::size_t v = 0; v < have.size(); ++v)
        if (!have[v]) return finish(reject(report, "vertex " + std::to_string(v) + " has no tilde entry"));
    const TildeP tilde = TildeP::from_values(std::move(values));

    std::map<FaceKey, const FaceCertificate*, FaceKeyLess> by_face;
    for (const auto& f : cert.faces) {
        if (!std::is_sorted(f.face.begin(), f.face.end())) return finish(reject(report, "face ids not sorted", f.face));
        if (!by_face.emplace(f.face, &f).second) return finish(reject(report, "duplicate face certificate", f.face));
        if (!dec.has_face(f.face)) return finish(reject(report, "certificate for a face that does not exist", f.face));
    }
    for (const auto& [face, cof] : dec.faces())
        if (!by_face.count(face)) return finish(reject(report, "face has no certificate", face));

    std::map<ConeId, Matrix<Rational>> cone_grads;
    for (const auto& [id, c] : dec.cones()) cone_grads.emplace(id, grad_of_tilde(dec, tilde, id));

    const ExactSystem sys = exact_system(ps);
    std::vector<const FaceCertificate*> order;
    for (const auto& [face, fc] : by_face) order.push_back(fc);
    std::vector<std::optional<Failure>> failures(order.size());
    std::vector<std::size_t> node_counts(order.size(), 0);
    std::exception_ptr error;

    auto check_one = [&](std::size_t idx) {
        const auto& fc = *order[idx];
        FaceReplay fr(sys);
        fr.ambient = dec.ambient_dim();
        fr.k = fc.face.size();
        fr.rays = face_matrix(dec, fc.face);
        fr.tilde = Matrix<Rational>(static_cast<std::size_t>(ps.size()), fr.k);
        for (std::size_t c = 0; c < fr.k; ++c)
            for (std::size_t i = 0; i < static_cast<std::size_t>(ps.size()); ++i) fr.tilde(i, c) = tilde.values(fc.face[c])[i];
        for (ConeId c : dec.cofaces(fc.face)) fr.coface_grads.push_back(&cone_grads.at(c));
        failures[idx] = fr.replay(fc.root, Matrix<Integer>::identity(fr.k), "root", 0);
        node_counts[idx] = fr.nodes;
    };

    const long count = static_cast<long>(order.size());
    if (threads == 1) {
        for (long i = 0; i < count; ++i) check_one(static_cast<std::size_t>(i));
    } else {
#pragma omp parallel for schedule(dynamic) num_threads(threads > 0 ? threads : omp_get_max_threads())
        for (long i = 0; i < count; ++i) {
            try {
                check_one(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(isoplex_verify_error)
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
    }

    report.faces_checked = order.size();
    for (std::size_t n : node_counts) report.nodes_checked += n;
    for (std::size_t i = 0; i < order.size(); ++i)
        if (failures[i]) return finish(reject(report, failures[i]->reason, order[i]->face, failures[i]->path));
    return finish(report);
}

}  // namespace isoplex
