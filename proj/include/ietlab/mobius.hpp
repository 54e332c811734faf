#pragma once

#include "ietlab/iet.hpp"

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace ietlab {

class MobiusTable {
public:
    // Linear sieve over 1..limit.
    explicit MobiusTable(long limit);

    long limit() const { return limit_; }
    int operator()(long n) const { return values_.at(static_cast<std::size_t>(n)); }
    // sum of mu(k) for k <= n
    long mertens(long n) const;

private:
    long limit_;
    std::vector<std::int8_t> values_;  // index 0 unused
};

MobiusTable sieve_mobius(long limit);

struct Observable {
    enum class Kind { Constant, SymbolRootOfUnity, CenteredIndicator };
    Kind kind = Kind::CenteredIndicator;
    int part = 1;  // partition piece for CenteredIndicator

    static Observable parse(const std::string& name);
    std::string name() const;
};

// F at a point coded by `symbol`, with piece lengths alpha, beta, 1 - alpha - beta.
std::complex<double> observable_value(const Observable& obs, int symbol, double alpha, double beta);

// f(k) = F(T^k x0) for k = 1..n (index k - 1).
std::vector<std::complex<double>> observable_sequence(const IETState& state, const Real& x0, const Observable& obs,
                                                      std::size_t n, const PrecisionPolicy& policy = {});

struct SeriesPoint {
    long n;
    std::complex<double> value;  // (1/n) sum_{k<=n} mu(k) f(k)
};

std::vector<SeriesPoint> disjointness_series(const MobiusTable& table, const std::vector<std::complex<double>>& f,
                                             const std::vector<long>& checkpoints);
std::vector<SeriesPoint> disjointness_series(const MobiusTable& table, const IETState& state, const Real& x0,
                                             const Observable& obs, const std::vector<long>& checkpoints,
                                             const PrecisionPolicy& policy = {});

// sum_{k<=n} mu(k) e(k theta)
std::complex<double> mu_exponential_sum(const MobiusTable& table, double theta, long n);

// max over theta = j/grid of |sum_{k<=n} mu(k) e(k theta)|
double mu_exponential_max(const MobiusTable& table, long n, std::size_t grid, unsigned jobs = 1);

struct ParsevalResult {
    double lhs = 0;          // |sum mu(k) f(k)|
    double rhs = 0;          // grid average of |F(theta)| |M(-theta)|
    double rhs_double = 0;   // same on twice the grid
    bool ok = false;
};

ParsevalResult parseval_check(const MobiusTable& table, const std::vector<std::complex<double>>& f,
                              std::size_t grid, double tolerance = 1e-6, unsigned jobs = 1);

// integral over [0, 2pi] of |sin((k+1)t/2) / sin(t/2)|
double dirichlet_l1(long k);
// integral over [0, pi] of sin(t)/t
double sine_integral_pi();

struct ClaimReport {
    double c_lower;           // 8/pi
    mpq_class eps_upper;      // 1/12
    mpq_class tau_upper;      // 1/3
    bool eps_is_tau_over_4;
    double log_x_c;           // ln (12 C)^12
    bool x_c_exceeds_24_12;   // certified with balls
    double f_at_x_c;
    double f_prime_at_x_c;    // relative to 1/x_c
    double log_root;          // ln x*, the root of f beyond x_c
    std::size_t amgm_tuples = 0;
    std::size_t amgm_failures = 0;

    bool ok() const;
};

// f(x) = x^{1/12} - C ln x - C ln 3 evaluated at ln x = log_x
double claim_f(double log_x, double c);

// prod log(2 + k_i) <= (log |W|^{1/n} + log 3)^n given prod k_i <= |W|
bool amgm_chain_holds(const std::vector<long>& k, const mpz_class& word_length);

ClaimReport verify_claim_constants(std::size_t amgm_samples = 1000, std::uint64_t seed = 1);

}  // namespace ietlab
