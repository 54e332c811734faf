#include "ietlab/confrac.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ietlab {

std::vector<Convergent> convergents(const Digits& digits, std::size_t n) {
    if (n > digits.size()) throw std::invalid_argument("more convergents requested than digits given");
    std::vector<Convergent> out;
    out.reserve(n + 1);
    mpz_class p_prev = 1, q_prev = 0, p = 0, q = 1;
    out.push_back({p, q});
    for (std::size_t k = 0; k < n; ++k) {
        if (digits[k] < 1) throw std::invalid_argument("continued fraction digits must be positive");
        mpz_class p_next = digits[k] * p + p_prev, q_next = digits[k] * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        out.push_back({p, q});
    }
    return out;
}

std::vector<Convergent> convergents(const Digits& digits) { return convergents(digits, digits.size()); }

Cylinder cylinder(const Digits& digits) {
    if (digits.empty()) throw std::invalid_argument("a cylinder needs at least one digit");
    auto cv = convergents(digits);
    const Convergent& cur = cv.back();
    const Convergent& prev = cv[cv.size() - 2];
    Cylinder c;
    c.first = mpq_class(cur.p, cur.q);
    c.second = mpq_class(cur.p + prev.p, cur.q + prev.q);
    c.first.canonicalize();
    c.second.canonicalize();
    c.length = mpq_class(1, cur.q * (cur.q + prev.q));
    c.length.canonicalize();
    return c;
}

Digits rcf_of_rational(const mpq_class& x) {
    if (x <= 0 || x >= 1) throw DomainViolation("continued fraction expansion needs 0 < x < 1");
    Digits out;
    mpz_class num = x.get_num(), den = x.get_den();
    // x = num/den; digit = floor(den/num)
    while (num != 0) {
        mpz_class digit = den / num;
        if (!digit.fits_slong_p()) throw std::overflow_error("continued fraction digit exceeds long");
        out.push_back(digit.get_si());
        mpz_class rem = den - digit * num;
        den = num;
        num = rem;
    }
    return out;
}

mpq_class rcf_value(const Digits& digits) {
    mpq_class tail = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        tail = 1 / (*it + tail);
        tail.canonicalize();
    }
    return tail;
}

RcfExpansion rcf_expand(const Real& x, std::size_t n, const PrecisionPolicy& policy) {
    RcfExpansion out;
    if (x.exact()) {
        Digits all = rcf_of_rational(*x.exact());
        out.terminated = all.size() <= n;
        if (all.size() > n) all.resize(n);
        out.digits = std::move(all);
        return out;
    }
    if (decide_sign(x, policy) <= 0 || decide_sign(1 - x, policy) <= 0)
        throw DomainViolation("continued fraction expansion needs 0 < x < 1");
    for (int bits = policy.initial_bits;; bits = policy.next(bits)) {
        out = RcfExpansion{};
        out.bits = bits;
        Ball v = x.at(bits);
        for (std::size_t k = 0; k < n; ++k) {
            if (v.contains_zero()) {
                out.truncated_at = k;
                break;
            }
            Ball inv = 1L / v;
            auto digit = inv.floor_if_certain();
            if (!digit || !digit->fits_slong_p()) {
                out.truncated_at = k;
                break;
            }
            out.digits.push_back(digit->get_si());
            v = inv - Ball(*digit, bits);
        }
        if (!out.truncated_at || bits >= policy.max_bits) return out;
    }
}

WindowProductResult window_product_check(const Digits& digits, double lambda, std::size_t max_window,
                                         std::size_t burn_in) {
    if (lambda <= 0 || max_window == 0) throw std::invalid_argument("window check needs lambda > 0 and a window");
    WindowProductResult r;
    const long double log_lambda = std::log(static_cast<long double>(lambda));
    std::vector<std::size_t> sizes(digits.size(), 0);
    for (std::size_t n = 0; n < digits.size(); ++n) {
        long double log_product = 0;
        for (std::size_t s = 1; s <= max_window && s <= n + 1; ++s) {
            log_product += std::log(static_cast<long double>(digits[n + 1 - s]));
            if (log_product >= s * log_lambda) {
                sizes[n] = s;
                break;
            }
        }
    }
    r.ok_from = digits.size();
    while (r.ok_from > 0 && sizes[r.ok_from - 1] != 0) --r.ok_from;
    for (std::size_t n = burn_in; n < digits.size(); ++n) {
        r.window_sizes.push_back(sizes[n]);
        if (sizes[n] == 0 && !r.failed_at) r.failed_at = n;
    }
    r.ok = !r.failed_at;
    return r;
}

std::vector<std::pair<std::size_t, double>> khintchine_running(const Digits& digits) {
    std::vector<std::pair<std::size_t, double>> out;
    long double sum = 0;
    for (std::size_t n = 1; n <= digits.size(); ++n) {
        sum += std::log(static_cast<long double>(digits[n - 1]));
        out.push_back({n, static_cast<double>(std::exp(sum / n))});
    }
    return out;
}

long sample_gauss_kuzmin(std::mt19937_64& rng) {
    // x = 2^u - 1 has the Gauss density; its first digit follows Gauss-Kuzmin
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double x;
    do x = std::exp2(unit(rng)) - 1; while (x <= 0);
    double digit = std::floor(1 / x);
    if (digit >= static_cast<double>(std::numeric_limits<long>::max())) return std::numeric_limits<long>::max();
    return static_cast<long>(digit);
}

}  // namespace ietlab
