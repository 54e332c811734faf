#pragma once

#include "ietlab/expansion.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace ietlab {

// Independent generator for one named item of a seeded run.
std::mt19937_64 derived_stream(std::uint64_t seed, std::string_view item);

// n_k, m_k uniform in [lo, hi], eps uniform; with lo >= 2 every prefix is admissible.
std::vector<ExpansionTriple> random_admissible_triples(std::mt19937_64& rng, std::size_t depth, long lo, long hi);

// Admissible triples whose digit sums satisfy the s-window condition with constant c0 from k = s on.
std::vector<ExpansionTriple> random_window_triples(std::mt19937_64& rng, std::size_t depth, double c0, std::size_t s);

}  // namespace ietlab
