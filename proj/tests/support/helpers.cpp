#include "helpers.hpp"

#include <map>

#include "isoplex/multi_index.hpp"

namespace isoplex::testing {

HomogeneousPoly random_poly(std::mt19937_64& rng, int nvars, int degree) {
    std::map<MultiIndex, Rational> terms;
    for (const auto& alpha : index_table(nvars, degree).entries()) {
        Rational c = random_rational(rng);
        if (c != 0) terms.emplace(alpha, c);
    }
    return HomogeneousPoly(nvars, degree, terms);
}

std::string data_path(const std::string& name) { return std::string(ISOPLEX_SOURCE_DIR) + "/data/" + name; }
std::string test_data_path(const std::string& name) { return std::string(ISOPLEX_SOURCE_DIR) + "/tests/data/" + name; }

}  // namespace isoplex::testing
