#include "isoplex/random_poly.hpp"

#include <cmath>
#include <map>

namespace isoplex {

HomogeneousPoly random_bombieri(int nvars, int degree, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const IndexTable& table = index_table(nvars, degree);
    std::map<MultiIndex, Rational> terms;
    for (std::size_t r = 0; r < table.size(); ++r) {
        // bernstein_factor is alpha! / d!
        const double c = normal(rng) * std::sqrt(1.0 / table.bernstein_factor(r));
        if (c != 0) terms.emplace(table[r], from_double(c));
    }
    return HomogeneousPoly(nvars, degree, terms);
}

PolySystem random_bombieri_system(int nvars, const std::vector<int>& degrees, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<HomogeneousPoly> polys;
    for (int d : degrees) polys.push_back(random_bombieri(nvars, d, rng));
    return PolySystem(std::move(polys));
}

}  // namespace isoplex
