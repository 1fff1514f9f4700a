#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "isoplex/poly.hpp"

namespace isoplex {

/// Syntax or semantic error in polynomial text, with a 1-based position.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& message);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/**
 * Reads the polynomial text format: one polynomial per line, terms such as `3/2 * x0^2 x1`
 * joined by `+` / `-`, `#` starting a comment. An optional line `nvars <k>` fixes the variable
 * count; otherwise it is one more than the largest variable index used. Non-homogeneous lines are
 * rejected with the offending monomials listed.
 */
PolySystem parse_system(std::string_view text);

PolySystem read_system_file(const std::string& path);

/// Inverse of parse_system for a whole system (includes the `nvars` line).
std::string format_system(const PolySystem& ps);

}  // namespace isoplex
