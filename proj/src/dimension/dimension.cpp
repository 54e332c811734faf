#include "ietlab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <thread>

namespace ietlab {

double zeta0() { return std::log(kKhinchin); }

double good_lower_bound(double c0) {
    if (!(2 * c0 >= 20)) throw DomainViolation("Good's bound is used for 2 C0 >= 20");
    return 0.5 + 1 / (2 * std::log(2 * c0 + 2));
}

double parameter_set_lower_bound(double c0) { return 1 + good_lower_bound(c0); }

namespace {

// Sums body(a1) over a1 in [lo, hi] on `jobs` threads, each thread owning a strided share.
template <class Body>
long double parallel_sum(long lo, long hi, unsigned jobs, Body body) {
    jobs = std::max(1u, jobs);
    std::vector<long double> partial(jobs, 0);
    auto worker = [&](unsigned w) {
        for (long a = lo + static_cast<long>(w); a <= hi; a += static_cast<long>(jobs)) partial[w] += body(a);
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
        for (auto& t : pool) t.join();
    }
    long double total = 0;
    for (auto p : partial) total += p;
    return total;
}

constexpr int kRadiusNodes = 16;

// Sum over a3 in [lo, hi] of ((a3 + r)(a3 + 1 + r))^{-d}, tabulated at Chebyshev points in r and interpolated.
struct TailInRatio {
    double r_max;
    std::vector<double> nodes, weights, values;

    TailInRatio(long lo, long hi, double d, double r_max) : r_max(r_max) {
        for (int k = 0; k < kRadiusNodes; ++k) {
            double angle = (2 * k + 1) * std::numbers::pi / (2 * kRadiusNodes);
            double r = r_max * (1 - std::cos(angle)) / 2;
            nodes.push_back(r);
            weights.push_back((k % 2 ? -1.0 : 1.0) * std::sin(angle));
            long double sum = 0;
            for (long a = lo; a <= hi; ++a) sum += std::exp(-d * std::log((a + r) * (a + 1 + r)));
            values.push_back(static_cast<double>(sum));
        }
    }

    double operator()(double r) const {
        double num = 0, den = 0;
        for (int k = 0; k < kRadiusNodes; ++k) {
            if (r == nodes[k]) return values[k];
            double c = weights[k] / (r - nodes[k]);
            num += c * values[k];
            den += c;
        }
        return num / den;
    }
};

long double cylinder_sum(long lo, long hi, int depth, double d, unsigned jobs) {
    switch (depth) {
        case 1: {
            long double s = 0;
            for (long a = lo; a <= hi; ++a) {
                auto q1 = static_cast<double>(a);
                s += std::exp(-d * std::log(q1 * (q1 + 1)));
            }
            return s;
        }
        case 2:
            return parallel_sum(lo, hi, jobs, [&](long a1) {
                long double s = 0;
                for (long a2 = lo; a2 <= hi; ++a2) {
                    std::int64_t q1 = a1, q2 = a2 * a1 + 1;
                    s += std::exp(-d * std::log(static_cast<double>(q2) * static_cast<double>(q2 + q1)));
                }
                return s;
            });
        default: {
            const std::int64_t width = hi - lo + 1;
            if (width * width * width <= 2000000) {
                return parallel_sum(lo, hi, jobs, [&](long a1) {
                    long double s = 0;
                    for (long a2 = lo; a2 <= hi; ++a2)
                        for (long a3 = lo; a3 <= hi; ++a3) {
                            std::int64_t q1 = a1, q2 = a2 * q1 + 1, q3 = a3 * q2 + q1;
                            s += std::exp(-d * std::log(static_cast<double>(q3) * static_cast<double>(q3 + q2)));
                        }
                    return s;
                });
            }
            // |I_3| = q2^{-2} / ((a3 + r)(a3 + 1 + r)) with r = q1/q2 <= 1/lo
            TailInRatio tail(lo, hi, d, 1.0 / lo);
            return parallel_sum(lo, hi, jobs, [&](long a1) {
                long double s = 0;
                for (long a2 = lo; a2 <= hi; ++a2) {
                    std::int64_t q1 = a1, q2 = a2 * q1 + 1;
                    double r = static_cast<double>(q1) / static_cast<double>(q2);
                    s += std::exp(-2 * d * std::log(static_cast<double>(q2))) * tail(r);
                }
                return s;
            });
        }
    }
}

}  // namespace

double cylinder_dim_estimate(long digit_min, long digit_max, int depth, unsigned jobs, double tol) {
    if (digit_min < 1 || digit_max < digit_min) throw std::invalid_argument("need 1 <= min <= max digits");
    if (depth < 1 || depth > 3) throw std::invalid_argument("cylinder depth must be 1, 2 or 3");
    auto excess = [&](double d) { return cylinder_sum(digit_min, digit_max, depth, d, jobs) - 1; };
    if (!(excess(0) > 0)) throw NonBracketing("cylinder sum does not exceed 1 at d = 0", 0.0);
    if (!(excess(1) < 0)) throw NonBracketing("cylinder sum is not below 1 at d = 1", 1.0);
    double lo = 0, hi = 1;
    while (hi - lo > tol) {
        double mid = (lo + hi) / 2;
        (excess(mid) > 0 ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

std::pair<double, double> min_gradient_of_a(int grid) {
    double min_alpha = INFINITY, min_beta = INFINITY;
    for (int i = 1; i < grid; ++i)
        for (int j = 1; i + j < grid; ++j) {
            double alpha = static_cast<double>(i) / grid, beta = static_cast<double>(j) / grid;
            min_alpha = std::min(min_alpha, std::fabs(-1 / (1 + beta)));
            min_beta = std::min(min_beta, std::fabs(-(1 - alpha) / ((1 + beta) * (1 + beta))));
        }
    return {min_alpha, min_beta};
}

DimensionReport p0_dimension_bounds(double c0, const PressureModel& model) {
    if (!(c0 >= 20)) throw DomainViolation("the parameter-set bounds assume C0 >= 20");
    DimensionReport r;
    r.c0 = c0;
    r.lambda = std::sqrt(2 * c0 / 3);
    r.zeta = std::log(r.lambda);
    r.zeta0 = zeta0();
    r.good = good_lower_bound(c0);
    r.lower_bound = parameter_set_lower_bound(c0);
    TZetaBand tz = solve_t_of_zeta_with_band(r.zeta, model);
    r.t = tz.value.t;
    r.q = tz.value.q;
    r.truncation_band = tz.band();
    r.upper_bound = 1 + r.t;
    auto [ga, gb] = min_gradient_of_a();
    r.gradient_nonvanishing = ga > 0 && gb > 0;
    r.lebesgue_null = r.upper_bound < 2;
    r.ok = 1.5 < r.lower_bound && r.lower_bound <= r.upper_bound && r.upper_bound < 2 && r.gradient_nonvanishing;
    return r;
}

GaussExponents gauss_exponents(const Digits& digits, std::size_t n) {
    if (n == 0 || digits.size() < n) throw std::invalid_argument("gauss_exponents needs at least n >= 1 digits");
    GaussExponents g;
    long double log_digits = 0;
    for (std::size_t j = 0; j < n; ++j) log_digits += std::log(static_cast<long double>(digits[j]));
    // T^j x = [0; a_{j+1}, a_{j+2}, ...] from the supplied digits; |T'(y)| = y^{-2}
    long double tail = 0, lyap = 0;
    std::vector<long double> orbit(digits.size());
    for (std::size_t k = digits.size(); k-- > 0;) {
        tail = 1 / (digits[k] + tail);
        orbit[k] = tail;
    }
    for (std::size_t j = 0; j < n; ++j) lyap += -2 * std::log(orbit[j]);
    g.khintchine = static_cast<double>(log_digits / n);
    g.lyapunov = static_cast<double>(lyap / n);
    return g;
}

GaussExponents gauss_exponents(const Real& x, std::size_t n, const PrecisionPolicy& policy) {
    RcfExpansion e = rcf_expand(x, n + 40, policy);
    if (e.digits.size() < n) throw PrecisionExhausted(e.bits);
    return gauss_exponents(e.digits, n);
}

}  // namespace ietlab
