#pragma once

#include "ietlab/expansion.hpp"

#include <gmpxx.h>

#include <string>
#include <vector>

namespace ietlab {

struct LengthTriple {
    mpz_class a, b, c;

    bool operator==(const LengthTriple&) const = default;
    // |a - b| = 1, c <= 2a, c <= 2b
    bool satisfies_invariants() const;
};

struct WordTriple {
    std::string A, B, C;

    LengthTriple lengths() const;
};

inline const LengthTriple kDefaultInit{2, 1, 3};

LengthTriple substitute(const LengthTriple& prev, const ExpansionTriple& t);
WordTriple substitute(const WordTriple& prev, const ExpansionTriple& t);

// One factor W^power of a new return word written over the previous words (0 = A, 1 = B, 2 = C).
struct Block {
    int word;
    long power;
};

// Block form W_1^{k_1} ... W_r^{k_r} of the new word `which` (0 = A, 1 = B, 2 = C); empty powers are dropped.
std::vector<Block> decompose(int which, const ExpansionTriple& t);

// Length triples for k = 0..depth (index 0 is init).
std::vector<LengthTriple> length_sequence(const std::vector<ExpansionTriple>& triples, const LengthTriple& init);

struct GrowthVerdict {
    std::size_t k;
    LengthTriple lengths;
    double min_ratio;  // min |W_k| / max |W_{k-1}|
    double bound;      // (n_k + m_k) / 2
    bool ok;           // decided exactly
};

std::vector<GrowthVerdict> verify_growth(const std::vector<ExpansionTriple>& triples,
                                         const LengthTriple& init = kDefaultInit);

// min |W_k| > C0^s max |W_{k-s}| for every window past burn-in (base index k - s >= 1 when available).
bool beta_expansion_check(const std::vector<ExpansionTriple>& triples, const LengthTriple& init, std::size_t s,
                          double c0);

}  // namespace ietlab
