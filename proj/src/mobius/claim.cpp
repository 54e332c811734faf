#include "ietlab/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ietlab {

double claim_f(double log_x, double c) { return std::exp(log_x / 12) - c * log_x - c * std::log(3.0); }

bool amgm_chain_holds(const std::vector<long>& k, const mpz_class& word_length) {
    if (k.empty()) throw std::invalid_argument("empty digit tuple");
    mpz_class product = 1;
    for (long v : k) {
        if (v < 1) throw std::invalid_argument("AM-GM chain needs positive digits");
        product *= v;
    }
    if (product > word_length) throw std::invalid_argument("digit product exceeds the word length");
    // equality needs every k_i = 1 (log(2 + k) = log 3k) and |W| = 1; otherwise the gap is strict
    bool all_ones = std::all_of(k.begin(), k.end(), [](long v) { return v == 1; });
    if (all_ones && word_length == 1) return true;
    const int bits = 256;
    Ball lhs(1L, bits);
    for (long v : k) lhs = lhs * log(Ball(2 + v, bits));
    const long n = static_cast<long>(k.size());
    Ball base = log(Ball(word_length, bits)) / n + log(Ball(3L, bits));
    Ball rhs = pow(base, n);
    return (rhs - lhs).sign_if_certain() > 0;
}

bool ClaimReport::ok() const {
    return eps_is_tau_over_4 && x_c_exceeds_24_12 && f_at_x_c < 0 && std::fabs(f_prime_at_x_c) < 1e-12 &&
           log_root > log_x_c && amgm_failures == 0 && amgm_tuples > 0;
}

ClaimReport verify_claim_constants(std::size_t amgm_samples, std::uint64_t seed) {
    ClaimReport r;
    const int bits = 512;
    Ball c_ball = Ball(8L, bits) / Ball::pi(bits);
    r.c_lower = c_ball.mid_double();
    r.eps_upper = mpq_class(1, 12);
    r.tau_upper = mpq_class(1, 3);
    r.eps_is_tau_over_4 = r.tau_upper / 4 == r.eps_upper;

    Ball x_c = pow(12L * c_ball, 12);
    Ball bound = pow(Ball(24L, bits), 12);
    r.x_c_exceeds_24_12 = (x_c - bound).sign_if_certain() > 0;
    r.log_x_c = (12L * log(12L * c_ball)).mid_double();

    const double c = r.c_lower;
    r.f_at_x_c = claim_f(r.log_x_c, c);
    // x f'(x) = x^{1/12}/12 - C, zero at x_c
    r.f_prime_at_x_c = std::exp(r.log_x_c / 12) / 12 - c;

    // f decreases up to x_c and increases after; find where it turns positive
    double lo = r.log_x_c, hi = 2 * r.log_x_c;
    while (claim_f(hi, c) <= 0) hi *= 2;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        double mid = (lo + hi) / 2;
        (claim_f(mid, c) < 0 ? lo : hi) = mid;
    }
    r.log_root = (lo + hi) / 2;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> digit(1, 200), len(1, 12), slack(0, 1000);
    for (std::size_t i = 0; i < amgm_samples; ++i) {
        std::vector<long> k(static_cast<std::size_t>(len(rng)));
        mpz_class product = 1;
        for (auto& v : k) {
            v = digit(rng);
            product *= v;
        }
        mpz_class word = product + slack(rng) * (i % 2);
        ++r.amgm_tuples;
        if (!amgm_chain_holds(k, word)) ++r.amgm_failures;
    }
    return r;
}

}  // namespace ietlab
