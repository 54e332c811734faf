#pragma once

#include "ietlab/expansion.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace ietlab {

// Regular continued fraction digits a_1, a_2, ... of a number in (0,1).
using Digits = std::vector<long>;

struct SrcfTerm {
    int eps;  // sign of the partial numerator
    long a;
    bool operator==(const SrcfTerm&) const = default;
};

// eps_1/(a_1 + eps_2/(a_2 + ...)).
using Srcf = std::vector<SrcfTerm>;

class DivisionByZeroTail : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Convergent {
    mpz_class p, q;
};

// p_k/q_k for k = 0..n (index 0 is 0/1).
std::vector<Convergent> convergents(const Digits& digits, std::size_t n);
std::vector<Convergent> convergents(const Digits& digits);

struct Cylinder {
    mpq_class first, second;  // p_n/q_n and (p_n+p_{n-1})/(q_n+q_{n-1})
    mpq_class length;         // 1/(q_n(q_n+q_{n-1}))
    mpq_class lo() const { return first < second ? first : second; }
    mpq_class hi() const { return first < second ? second : first; }
};

Cylinder cylinder(const Digits& digits);

struct RcfExpansion {
    Digits digits;
    bool terminated = false;                  // exact rational whose expansion ended
    std::optional<std::size_t> truncated_at;  // digit index that could not be certified
    int bits = 0;
};

// Euclid on exact inputs, otherwise the Gauss map on balls with certified floors.
RcfExpansion rcf_expand(const Real& x, std::size_t n, const PrecisionPolicy& policy = {});
Digits rcf_of_rational(const mpq_class& x);
mpq_class rcf_value(const Digits& digits);

Ball srcf_eval(const Srcf& s, std::size_t depth, int bits);
mpq_class srcf_value(const Srcf& s, std::size_t depth);
mpq_class srcf_value(const Srcf& s);

// [(+1,2), (+1,S_1), (eps_2,S_2), ...] with S_k = n_k + m_k; evaluates to (1-alpha)/(1+beta).
Srcf srcf_of_expansion(const std::vector<ExpansionTriple>& triples);
Srcf srcf_of_expansion(const ExpansionSeq& seq);

// Right side of a - 1/(b+x) = (a-1) + 1/(1 + 1/(b-1+x)).
mpq_class singularized_value(const mpq_class& a, const mpq_class& b, const mpq_class& x);

struct RcfConversion {
    Digits digits;
    bool open_run = false;  // input ended inside a run of (-1)/2 terms, so a longer prefix may change the last digits
};

// Left-to-right elimination of negative numerators; the value is preserved exactly.
RcfConversion srcf_to_rcf(const Srcf& s);

struct WindowProductResult {
    bool ok = false;
    std::size_t ok_from = 0;                 // every n >= ok_from has a good window
    std::vector<std::size_t> window_sizes;   // smallest good s for n = burn_in.., 0 when none
    std::optional<std::size_t> failed_at;
};

// For each n >= burn_in, the smallest s <= max_window with (a_n a_{n-1} ... a_{n-s+1})^{1/s} >= lambda.
WindowProductResult window_product_check(const Digits& digits, double lambda, std::size_t max_window,
                                         std::size_t burn_in = 2);

struct WindowBoundCheck {
    WindowResult window;          // the digit-sum condition on the triples
    Digits rcf;                   // regular expansion of the SRCF built from the triples
    WindowProductResult product;  // lambda = sqrt(2 C0 / 3), max window 2s
};

// Digit sums with s-window products above (2 C0)^s give regular digits with 2s-window means above sqrt(2 C0 / 3).
WindowBoundCheck window_bound_from_expansion(const std::vector<ExpansionTriple>& triples, double c0, std::size_t s,
                                             std::size_t burn_in = 2);

// (n, (a_1 ... a_n)^{1/n}) for n = 1..len.
std::vector<std::pair<std::size_t, double>> khintchine_running(const Digits& digits);

// A digit with the Gauss-Kuzmin law P(a = k) = -log2(1 - 1/(k+1)^2).
long sample_gauss_kuzmin(std::mt19937_64& rng);

}  // namespace ietlab
