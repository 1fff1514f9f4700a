#pragma once

#include <cstdint>
#include <random>

#include "isoplex/poly.hpp"

namespace isoplex {

/**
 * Random form for the Bombieri norm: the coefficient of x^alpha is a standard normal draw times
 * sqrt(d! / alpha!), stored as the exact value of the binary64 result. Terms are drawn in
 * multi-index rank order, so a seeded engine reproduces the same polynomial.
 */
HomogeneousPoly random_bombieri(int nvars, int degree, std::mt19937_64& rng);

PolySystem random_bombieri_system(int nvars, const std::vector<int>& degrees, std::uint64_t seed);

}  // namespace isoplex
