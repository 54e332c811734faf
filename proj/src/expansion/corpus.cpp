#include "ietlab/corpus.hpp"

#include <cmath>

namespace ietlab {

std::mt19937_64 derived_stream(std::uint64_t seed, std::string_view item) {
    // FNV-1a keeps item streams stable across platforms
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : item) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return std::mt19937_64(seq);
}

std::vector<ExpansionTriple> random_admissible_triples(std::mt19937_64& rng, std::size_t depth, long lo, long hi) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("digit range must satisfy 1 <= lo <= hi");
    std::uniform_int_distribution<long> digit(lo, hi);
    std::bernoulli_distribution sign(0.5);
    std::vector<ExpansionTriple> out;
    for (std::size_t k = 0; k < depth; ++k) {
        ExpansionTriple t{digit(rng), digit(rng), sign(rng) ? 1 : -1};
        // keep the prefix free of the patterns (1, +1)
        if (t.eps == 1 && (t.n == 1 || t.m == 1)) t.eps = -1;
        out.push_back(t);
    }
    return out;
}

std::vector<ExpansionTriple> random_window_triples(std::mt19937_64& rng, std::size_t depth, double c0,
                                                   std::size_t s) {
    if (s == 0) throw std::invalid_argument("window length must be positive");
    std::uniform_int_distribution<long> sum_dist(4, 400), extra(0, 50);
    std::bernoulli_distribution sign(0.5);
    const long double target = std::pow(static_cast<long double>(2 * c0), static_cast<long double>(s));
    std::vector<long> sums;
    std::vector<ExpansionTriple> out;
    for (std::size_t k = 0; k < depth; ++k) {
        long sum = sum_dist(rng);
        if (k + 1 >= s) {
            long double previous = 1;
            for (std::size_t j = k + 1 - s; j < k; ++j) previous *= sums[j];
            if (previous * sum < target) sum = static_cast<long>(std::ceil(target / previous)) + extra(rng);
        }
        sum = std::max(sum, 4L);
        sums.push_back(sum);
        std::uniform_int_distribution<long> split(2, sum - 2);
        long n = split(rng);
        out.push_back({n, sum - n, sign(rng) ? 1 : -1});
    }
    return out;
}

}  // namespace ietlab
