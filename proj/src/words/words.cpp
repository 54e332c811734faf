#include "ietlab/words.hpp"

#include <algorithm>
#include <stdexcept>

namespace ietlab {

namespace {

void check_digits(const ExpansionTriple& t) {
    if (t.n < 1 || t.m < 1 || (t.eps != 1 && t.eps != -1))
        throw std::invalid_argument("substitution needs n, m >= 1 and eps = +-1");
}

std::string power(const std::string& w, long k) {
    std::string out;
    out.reserve(w.size() * static_cast<std::size_t>(std::max(k, 0L)));
    for (long i = 0; i < k; ++i) out += w;
    return out;
}

mpz_class min3(const LengthTriple& l) { return std::min({l.a, l.b, l.c}); }
mpz_class max3(const LengthTriple& l) { return std::max({l.a, l.b, l.c}); }

double ratio(const mpz_class& num, const mpz_class& den) { return mpq_class(num, den).get_d(); }

}  // namespace

bool LengthTriple::satisfies_invariants() const {
    mpz_class d = a - b;
    return abs(d) == 1 && c <= 2 * a && c <= 2 * b;
}

LengthTriple WordTriple::lengths() const { return {mpz_class(A.size()), mpz_class(B.size()), mpz_class(C.size())}; }

std::vector<Block> decompose(int which, const ExpansionTriple& t) {
    check_digits(t);
    std::vector<Block> raw;
    constexpr int A = 0, B = 1, C = 2;
    // common head A^{n-1} C
    raw.push_back({A, t.n - 1});
    raw.push_back({C, 1});
    bool plus = t.eps > 0;
    switch (which) {
        case A:
            raw.push_back({B, plus ? t.m - 1 : t.m});
            if (plus) raw.push_back({A, 1});
            break;
        case B:
            raw.push_back({B, plus ? t.m : t.m - 1});
            if (!plus) raw.push_back({A, 1});
            break;
        case C:
            raw.push_back({B, plus ? t.m - 1 : t.m});
            if (!plus) raw.push_back({A, 1});
            break;
        default: throw std::invalid_argument("word index must be 0, 1 or 2");
    }
    std::vector<Block> out;
    for (const auto& b : raw)
        if (b.power > 0) out.push_back(b);
    return out;
}

LengthTriple substitute(const LengthTriple& prev, const ExpansionTriple& t) {
    const mpz_class* len[3] = {&prev.a, &prev.b, &prev.c};
    mpz_class next[3];
    for (int w = 0; w < 3; ++w)
        for (const Block& b : decompose(w, t)) next[w] += b.power * *len[b.word];
    return {next[0], next[1], next[2]};
}

WordTriple substitute(const WordTriple& prev, const ExpansionTriple& t) {
    const std::string* words[3] = {&prev.A, &prev.B, &prev.C};
    std::string next[3];
    for (int w = 0; w < 3; ++w)
        for (const Block& b : decompose(w, t)) next[w] += power(*words[b.word], b.power);
    return {next[0], next[1], next[2]};
}

std::vector<LengthTriple> length_sequence(const std::vector<ExpansionTriple>& triples, const LengthTriple& init) {
    std::vector<LengthTriple> seq{init};
    for (const auto& t : triples) seq.push_back(substitute(seq.back(), t));
    return seq;
}

std::vector<GrowthVerdict> verify_growth(const std::vector<ExpansionTriple>& triples, const LengthTriple& init) {
    std::vector<LengthTriple> seq = length_sequence(triples, init);
    std::vector<GrowthVerdict> out;
    for (std::size_t k = 1; k < seq.size(); ++k) {
        mpz_class lo = min3(seq[k]), hi = max3(seq[k - 1]);
        long digit_sum = triples[k - 1].n + triples[k - 1].m;
        bool ok = 2 * lo >= digit_sum * hi;
        out.push_back({k, seq[k], ratio(lo, hi), digit_sum / 2.0, ok});
    }
    return out;
}

bool beta_expansion_check(const std::vector<ExpansionTriple>& triples, const LengthTriple& init, std::size_t s,
                          double c0) {
    if (s == 0) throw std::invalid_argument("window length must be positive");
    if (triples.size() < s) throw std::invalid_argument("depth must be at least s");
    std::vector<LengthTriple> seq = length_sequence(triples, init);
    mpq_class factor = 1, c = rational_from_double(c0);
    for (std::size_t i = 0; i < s; ++i) factor *= c;
    const std::size_t depth = triples.size();
    // skip the initial words unless that would leave no window at all
    std::size_t first_base = depth >= s + 1 ? 1 : 0;
    for (std::size_t base = first_base; base + s <= depth; ++base) {
        mpq_class lhs(min3(seq[base + s])), rhs = factor * max3(seq[base]);
        if (!(lhs > rhs)) return false;
    }
    return true;
}

}  // namespace ietlab
