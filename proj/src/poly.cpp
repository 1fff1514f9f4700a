#include "isoplex/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace isoplex {

HomogeneousPoly::HomogeneousPoly(int nvars, int degree, const std::map<MultiIndex, Rational>& terms)
    : nvars_(nvars), degree_(degree) {
    if (nvars <= 0) throw std::invalid_argument("polynomial needs at least one variable");
    if (degree < 0) throw std::invalid_argument("negative degree");
    for (const auto& [alpha, c] : terms) {
        if (alpha.size() != static_cast<std::size_t>(nvars))
            throw std::invalid_argument("exponent vector length does not match variable count");
        int total = 0;
        for (int e : alpha) {
            if (e < 0) throw std::invalid_argument("negative exponent");
            total += e;
        }
        if (total != degree) throw std::invalid_argument("monomial degree differs from polynomial degree");
        if (c != 0) terms_.emplace(alpha, c);
    }
    std::vector<Rational> coeffs;
    for (const auto& [alpha, c] : terms_) {
        exact_list_.emplace_back(alpha, c);
        float_list_.emplace_back(alpha, c.get_d());
        coeffs.push_back(c);
    }
    const Integer l = common_denominator(coeffs);
    for (const auto& [alpha, c] : terms_) integer_list_.emplace_back(alpha, c.get_num() * (l / c.get_den()));
}

Rational HomogeneousPoly::eval(std::span<const Rational> x) const {
    if (x.size() != static_cast<std::size_t>(nvars_)) throw std::invalid_argument("eval: dimension mismatch");
    Rational sum = 0;
    Rational term;
    for (const auto& [alpha, c] : exact_list_) {
        term = c;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            for (int e = 0; e < alpha[i]; ++e) term *= x[i];
        sum += term;
    }
    return sum;
}

double HomogeneousPoly::eval(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(nvars_)) throw std::invalid_argument("eval: dimension mismatch");
    double sum = 0;
    for (const auto& [alpha, c] : float_list_) {
        double term = c;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            for (int e = 0; e < alpha[i]; ++e) term *= x[i];
        sum += term;
    }
    return sum;
}

std::vector<HomogeneousPoly> HomogeneousPoly::gradient() const {
    std::vector<HomogeneousPoly> out;
    const int d = std::max(degree_ - 1, 0);
    for (int v = 0; v < nvars_; ++v) {
        std::map<MultiIndex, Rational> terms;
        if (degree_ > 0) {
            for (const auto& [alpha, c] : terms_) {
                const int e = alpha[static_cast<std::size_t>(v)];
                if (e == 0) continue;
                MultiIndex beta = alpha;
                --beta[static_cast<std::size_t>(v)];
                terms[beta] += c * e;
            }
        }
        out.emplace_back(nvars_, d, terms);
    }
    return out;
}

HomogeneousPoly HomogeneousPoly::substitute_linear(const Matrix<Rational>& m) const {
    if (m.rows() != static_cast<std::size_t>(nvars_)) throw std::invalid_argument("substitute_linear: dimension mismatch");
    if (m.cols() == 0) throw std::invalid_argument("substitute_linear: empty chart");
    const LinearPowers<Rational> powers(m, degree_);
    return from_dense(substitute(exact_list_, degree_, powers));
}

double HomogeneousPoly::coefficient_l1() const {
    double s = 0;
    for (const auto& [alpha, c] : float_list_) s += std::abs(c);
    return s;
}

std::string HomogeneousPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [alpha, c] : terms_) {
        Rational mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        os << isoplex::to_string(mag);
        bool any = false;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (alpha[i] == 0) continue;
            os << (any ? " " : " * ") << "x" << i;
            if (alpha[i] != 1) os << "^" << alpha[i];
            any = true;
        }
    }
    return os.str();
}

HomogeneousPoly from_dense(const DensePoly<Rational>& p) {
    std::map<MultiIndex, Rational> terms;
    const auto& table = p.table();
    for (std::size_t r = 0; r < p.coeffs.size(); ++r)
        if (p.coeffs[r] != 0) terms.emplace(table[r], p.coeffs[r]);
    return HomogeneousPoly(p.nvars, p.degree, terms);
}

DensePoly<Rational> to_dense(const HomogeneousPoly& p) {
    DensePoly<Rational> d(p.nvars(), p.degree());
    for (const auto& [alpha, c] : p.terms()) d.coeffs[multi_index_rank(alpha)] = c;
    return d;
}

PolySystem::PolySystem(std::vector<HomogeneousPoly> polys) : polys_(std::move(polys)) {
    if (polys_.empty()) throw std::invalid_argument("empty polynomial system");
    nvars_ = polys_.front().nvars();
    for (const auto& p : polys_) {
        if (p.nvars() != nvars_) throw std::invalid_argument("polynomials use different variable counts");
        if (p.degree() < 1) throw std::invalid_argument("polynomials must have degree at least one");
    }
    if (static_cast<int>(polys_.size()) > nvars_ - 1)
        throw std::invalid_argument("too many equations: need m <= nvars - 1");
    for (const auto& p : polys_) gradients_.push_back(p.gradient());
}

std::vector<int> PolySystem::degrees() const {
    std::vector<int> d;
    for (const auto& p : polys_) d.push_back(p.degree());
    return d;
}

int PolySystem::max_degree() const {
    int d = 0;
    for (const auto& p : polys_) d = std::max(d, p.degree());
    return d;
}

namespace {

template <typename T>
const SparseTerms<T>& terms_of(const HomogeneousPoly& p) {
    if constexpr (std::is_same_v<T, double>)
        return p.float_terms();
    else
        return p.exact_terms();
}

template <typename T>
JacobianForm<T> gradient_bernstein_impl(const PolySystem& ps, const Matrix<T>& m) {
    if (m.rows() != static_cast<std::size_t>(ps.nvars())) throw std::invalid_argument("gradient_bernstein: dimension mismatch");
    const LinearPowers<T> powers(m, std::max(ps.max_degree() - 1, 0));
    JacobianForm<T> out;
    out.m = ps.size();
    out.ambient = ps.nvars();
    for (const auto& grads : ps.gradients()) {
        std::vector<BernsteinForm<T>> row;
        for (const auto& g : grads) row.push_back(to_bernstein(substitute(terms_of<T>(g), g.degree(), powers)));
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace

JacobianForm<Rational> gradient_bernstein(const PolySystem& ps, const Matrix<Rational>& m) {
    return gradient_bernstein_impl(ps, m);
}

JacobianForm<double> gradient_bernstein(const PolySystem& ps, const Matrix<double>& m) {
    return gradient_bernstein_impl(ps, m);
}

}  // namespace isoplex
