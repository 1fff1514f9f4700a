#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "isoplex/criterion.hpp"
#include "isoplex/poly.hpp"
#include "isoplex/rational.hpp"
#include "isoplex/simplex.hpp"

namespace isoplex {

/**
 * Everything needed to re-check a solve besides the input polynomials.
 *
 * Text layout, one record per line, `#` starts a comment:
 *
 *     [header]
 *     nvars 3
 *     m 1
 *     degrees 2
 *     [vertices]
 *     v <id> <ray coordinates>
 *     [cones]
 *     c <id> <vertex ids>
 *     [tilde]
 *     t <vertex id> <p_1(ray)> ... <p_m(ray)>
 *     [face <vertex ids>]
 *     <tree>
 *
 * Trees are S-expressions: `(split <edge> <tree> <tree>)`, `(sign <i> <+|->)` and
 * `(sep (<signs> <N_0> ... <N_n>) ...)` with one group per sign vector whose first entry is `+`.
 * Rationals are written `num` or `num/den`.
 */
struct Certificate {
    int nvars = 0;
    int m = 0;
    std::vector<int> degrees;
    std::vector<std::pair<VertexId, std::vector<Rational>>> vertices;
    std::vector<Cone> cones;
    std::vector<std::pair<VertexId, std::vector<Rational>>> tilde;
    std::vector<FaceCertificate> faces;
};

class CertificateFormatError : public std::runtime_error {
public:
    CertificateFormatError(int line, const std::string& msg);
    int line() const { return line_; }

private:
    int line_;
};

Certificate make_certificate(const PolySystem& ps, const Decomposition& dec, const TildeP& tilde,
                             const std::vector<FaceCertificate>& faces);

std::string write_certificate(const Certificate& cert);
std::string write_tree(const CertNode& node);

/// Throws CertificateFormatError on anything that does not follow the layout.
Certificate parse_certificate(std::string_view text);
Certificate read_certificate_file(const std::string& path);

/// Decomposition and interpolant stored in a certificate, without any checking beyond structure.
/// Throws std::invalid_argument when they cannot be assembled.
std::pair<Decomposition, TildeP> rebuild(const Certificate& cert);

enum class VerifyOutcome { Accept, Reject };

struct VerifyReport {
    VerifyOutcome outcome = VerifyOutcome::Accept;
    FaceKey face;      // offending face (Reject), empty for global failures
    std::string path;  // node path such as "root/0/1"
    std::string reason;
    std::size_t faces_checked = 0;
    std::size_t nodes_checked = 0;
    double wall_time = 0;

    bool accepted() const { return outcome == VerifyOutcome::Accept; }
};

/**
 * Replays the certificate in exact arithmetic: decomposition structure, interpolation values, the
 * face list, and every tree leaf (strict signs of the integer-scaled Bernstein coefficients, or
 * N . r > 0 for every signed gradient row). No floating-point result influences the verdict.
 * Faces are checked in parallel when threads != 1; the first failing face in order is reported.
 */
VerifyReport check_certificate(const PolySystem& ps, const Certificate& cert, int threads = 1);

}  // namespace isoplex
