#include "isoplex/parse.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace isoplex {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct RawTerm {
    Rational coef;
    std::map<int, int> powers;  // variable index -> exponent
    int column = 0;
    int degree() const {
        int d = 0;
        for (const auto& [v, e] : powers) d += e;
        return d;
    }
};

class LineParser {
public:
    LineParser(std::string_view text, int line) : s_(text), line_(line) {}

    std::vector<RawTerm> parse() {
        std::vector<RawTerm> terms;
        skip_ws();
        bool negative = false;
        if (peek() == '+' || peek() == '-') {
            negative = peek() == '-';
            ++pos_;
        }
        for (;;) {
            RawTerm t = term();
            if (negative) t.coef = -t.coef;
            terms.push_back(std::move(t));
            skip_ws();
            if (at_end()) break;
            if (peek() != '+' && peek() != '-') fail("expected '+' or '-'");
            negative = peek() == '-';
            ++pos_;
        }
        return terms;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, static_cast<int>(pos_) + 1, msg); }

    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    std::string_view digits() {
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) fail("expected digits");
        return s_.substr(start, pos_ - start);
    }

    RawTerm term() {
        skip_ws();
        RawTerm t;
        t.column = static_cast<int>(pos_) + 1;
        t.coef = 1;
        bool have_coef = false;
        bool have_factor = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            std::string num(digits());
            if (peek() == '/') {
                ++pos_;
                num += "/";
                num += digits();
            }
            try {
                t.coef = parse_rational(num);
            } catch (const std::exception& e) {
                fail(e.what());
            }
            have_coef = true;
        }
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                if (!have_coef && !have_factor) fail("unexpected '*'");
                ++pos_;
                skip_ws();
                if (peek() != 'x') fail("expected a variable after '*'");
            }
            if (peek() != 'x') break;
            ++pos_;
            const int var = std::stoi(std::string(digits()));
            int exp = 1;
            skip_ws();
            if (peek() == '^') {
                ++pos_;
                skip_ws();
                exp = std::stoi(std::string(digits()));
            }
            t.powers[var] += exp;
            have_factor = true;
        }
        if (!have_coef && !have_factor) fail("expected a term");
        return t;
    }

    std::string_view s_;
    int line_;
    std::size_t pos_ = 0;
};

std::string describe(const RawTerm& t) {
    std::ostringstream os;
    os << to_string(t.coef);
    for (const auto& [v, e] : t.powers) {
        os << " x" << v;
        if (e != 1) os << "^" << e;
    }
    return os.str();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

PolySystem parse_system(std::string_view text) {
    struct Pending {
        int line;
        std::vector<RawTerm> terms;
    };
    std::vector<Pending> lines;
    int declared_nvars = -1;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const std::string_view content = trim(line);
        if (content.empty()) continue;
        if (content.rfind("nvars", 0) == 0) {
            const std::string rest(trim(content.substr(5)));
            const int column = static_cast<int>(line.find("nvars")) + 1;
            if (declared_nvars != -1) throw ParseError(line_no, column, "duplicate nvars directive");
            if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
                throw ParseError(line_no, column, "nvars expects a positive integer");
            declared_nvars = std::stoi(rest);
            if (declared_nvars < 2) throw ParseError(line_no, column, "nvars must be at least 2");
            continue;
        }
        lines.push_back({line_no, LineParser(line, line_no).parse()});
    }
    if (lines.empty()) throw ParseError(line_no, 1, "no polynomial found");

    int max_var = -1;
    for (const auto& l : lines)
        for (const auto& t : l.terms)
            for (const auto& [v, e] : t.powers) {
                if (declared_nvars != -1 && v >= declared_nvars)
                    throw ParseError(l.line, t.column, "variable x" + std::to_string(v) + " exceeds nvars");
                max_var = std::max(max_var, v);
            }
    const int nvars = declared_nvars != -1 ? declared_nvars : max_var + 1;
    if (nvars < 2) throw ParseError(lines.front().line, 1, "need at least two variables");

    std::vector<HomogeneousPoly> polys;
    for (const auto& l : lines) {
        std::map<int, int> count;
        for (const auto& t : l.terms) ++count[t.degree()];
        // majority degree, ties resolved towards the highest degree
        int degree = 0, best = -1;
        for (const auto& [d, c] : count)
            if (c >= best) {
                best = c;
                degree = d;
            }
        std::vector<std::string> offending;
        int column = 0;
        for (const auto& t : l.terms)
            if (t.degree() != degree) {
                if (offending.empty()) column = t.column;
                offending.push_back(describe(t));
            }
        if (!offending.empty()) {
            std::string msg = "polynomial is not homogeneous of degree " + std::to_string(degree) + "; offending monomials:";
            for (const auto& o : offending) msg += " [" + o + "]";
            throw ParseError(l.line, column, msg);
        }
        if (degree < 1) throw ParseError(l.line, 1, "constant polynomial");
        std::map<MultiIndex, Rational> terms;
        for (const auto& t : l.terms) {
            MultiIndex alpha(static_cast<std::size_t>(nvars), 0);
            for (const auto& [v, e] : t.powers) alpha[static_cast<std::size_t>(v)] = e;
            terms[alpha] += t.coef;
        }
        HomogeneousPoly p(nvars, degree, terms);
        if (p.is_zero()) throw ParseError(l.line, 1, "polynomial is identically zero");
        polys.push_back(std::move(p));
    }
    if (static_cast<int>(polys.size()) > nvars - 1)
        throw ParseError(lines.back().line, 1, "too many equations for " + std::to_string(nvars) + " variables");
    return PolySystem(std::move(polys));
}

PolySystem read_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_system(ss.str());
}

std::string format_system(const PolySystem& ps) {
    std::ostringstream os;
    os << "nvars " << ps.nvars() << "\n";
    for (const auto& p : ps.polys()) os << p.to_string() << "\n";
    return os.str();
}

}  // namespace isoplex
