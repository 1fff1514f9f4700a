#pragma once

#include <random>
#include <string>
#include <vector>

#include "isoplex/matrix.hpp"
#include "isoplex/parse.hpp"
#include "isoplex/poly.hpp"
#include "isoplex/rational.hpp"

namespace isoplex::testing {

/// Small random rational num/den with |num| <= 20, 1 <= den <= 9.
inline Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline std::vector<Rational> random_rational_vector(std::mt19937_64& rng, std::size_t n) {
    std::vector<Rational> v(n);
    for (auto& x : v) x = random_rational(rng);
    return v;
}

inline Matrix<Rational> random_rational_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    Matrix<Rational> m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = random_rational(rng);
    return m;
}

/// Random homogeneous polynomial with small rational coefficients on every monomial.
HomogeneousPoly random_poly(std::mt19937_64& rng, int nvars, int degree);

/// Directory of the checked-in data files.
std::string data_path(const std::string& name);
std::string test_data_path(const std::string& name);

inline PolySystem load(const std::string& name) { return read_system_file(data_path(name)); }

}  // namespace isoplex::testing
