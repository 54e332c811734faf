#include "ietlab/expansion.hpp"

namespace ietlab {

WindowResult check_window_condition(const std::vector<ExpansionTriple>& triples, double c0, std::size_t s) {
    if (s == 0) throw std::invalid_argument("window length must be positive");
    if (!(c0 >= 0)) throw std::invalid_argument("C0 must be nonnegative");
    WindowResult r;
    const std::size_t depth = triples.size();
    if (depth < s) return r;

    mpq_class bound = 2 * rational_from_double(c0), target = 1;
    for (std::size_t i = 0; i < s; ++i) target *= bound;

    // Scan windows from the end; k0 is one past the last failing window end (1-based ends).
    std::size_t k0 = s;
    for (std::size_t k = depth; k >= s; --k) {
        mpz_class prod = 1;
        for (std::size_t j = k - s; j < k; ++j) prod *= triples[j].n + triples[j].m;
        if (mpq_class(prod) < target) {
            k0 = k + 1;
            break;
        }
    }
    if (k0 > depth) return r;
    r.holds = true;
    r.holds_from = k0;
    return r;
}

}  // namespace ietlab
