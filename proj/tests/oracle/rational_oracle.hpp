#pragma once

// Exact-rational reference implementations used only by the tests.

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

namespace oracle {

struct Triple {
    long n, m;
    int eps;
};

struct Expansion {
    std::vector<Triple> triples;
    std::optional<std::size_t> degenerate_at;  // subscript of the first exactly-degenerate quantity
};

inline mpz_class floor_q(const mpq_class& v) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
    return f;
}

// Expansion of a rational point of D, stopping at the first exact tie.
inline Expansion expand(const mpq_class& alpha, const mpq_class& beta, std::size_t depth) {
    Expansion out;
    mpq_class x = (1 - alpha - beta) / (1 - alpha), y = (1 - 2 * alpha) / (1 - alpha);
    long pn = 0, pm = 0;
    for (std::size_t k = 0;; ++k) {
        mpq_class s = x + y - 1;
        if (s == 0) {
            out.degenerate_at = k + 1;
            return out;
        }
        int eps = s > 0 ? 1 : -1;
        if (k > 0) out.triples.push_back({pn, pm, eps});
        if (out.triples.size() >= depth) return out;
        mpq_class bx, by;
        if (eps > 0) {
            bx = y / s;
            by = x / s;
        } else {
            bx = (1 - y) / (-s);
            by = (1 - x) / (-s);
        }
        mpz_class n = floor_q(bx), m = floor_q(by);
        if (n == bx || m == by) {
            out.degenerate_at = k + 1;
            return out;
        }
        x = bx - n;
        y = by - m;
        pn = n.get_si();
        pm = m.get_si();
    }
}

// Regular continued fraction digits of q in (0,1) by Euclid.
inline std::vector<long> rcf_digits(mpq_class q) {
    std::vector<long> d;
    while (q != 0) {
        mpq_class inv = 1 / q;
        mpz_class a = floor_q(inv);
        d.push_back(a.get_si());
        q = inv - a;
    }
    return d;
}

inline mpq_class rcf_value(const std::vector<long>& digits) {
    mpq_class v = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) v = 1 / (*it + v);
    return v;
}

// eps_1/(a_1 + eps_2/(a_2 + ...)), evaluated exactly from the bottom.
inline mpq_class srcf_value(const std::vector<std::pair<int, long>>& terms) {
    mpq_class tail = 0;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) tail = it->first / (it->second + tail);
    return tail;
}

// Canonical form of a finite RCF: merge a trailing digit 1 into its predecessor.
inline std::vector<long> canonical_rcf(std::vector<long> d) {
    if (d.size() >= 2 && d.back() == 1) {
        d.pop_back();
        d.back() += 1;
    }
    return d;
}

inline int mobius_by_trial_division(long n) {
    int mu = 1;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

}  // namespace oracle
