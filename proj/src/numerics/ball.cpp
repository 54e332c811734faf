#include "ietlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace ietlab {

PrecisionPolicy PrecisionPolicy::from_environment() {
    PrecisionPolicy policy;
    if (const char* env = std::getenv("IETLAB_PRECISION_BITS"); env && *env) {
        char* end = nullptr;
        long bits = std::strtol(env, &end, 10);
        if (*end != '\0' || bits < 16 || bits > (1 << 24))
            throw std::invalid_argument(std::string("IETLAB_PRECISION_BITS: bad value '") + env + "'");
        policy.initial_bits = static_cast<int>(bits);
        policy.max_bits = std::max(policy.max_bits, policy.initial_bits);
    }
    return policy;
}

void PrecisionPolicy::validate() const {
    if (initial_bits < 16) throw std::invalid_argument("initial_bits must be at least 16");
    if (initial_bits > max_bits) throw std::invalid_argument("initial_bits exceeds max_bits");
    if (multiplier < 2) throw std::invalid_argument("escalation multiplier must be at least 2");
}

int PrecisionPolicy::next(int bits) const {
    long grown = static_cast<long>(bits) * multiplier;
    return static_cast<int>(std::min<long>(grown, max_bits));
}

// ---- Mpfr

Mpfr::Mpfr(mpfr_prec_t prec) {
    mpfr_init2(value_, prec);
    mpfr_set_zero(value_, 1);
}

Mpfr::Mpfr(const Mpfr& other) {
    mpfr_init2(value_, other.prec());
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

Mpfr::Mpfr(Mpfr&& other) noexcept {
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
}

Mpfr& Mpfr::operator=(const Mpfr& other) {
    if (this != &other) {
        mpfr_set_prec(value_, other.prec());
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

Mpfr& Mpfr::operator=(Mpfr&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

Mpfr::~Mpfr() { mpfr_clear(value_); }

// ---- Ball

namespace {

Mpfr rad_abs_up(mpfr_srcptr x) {
    Mpfr r(Ball::kRadiusBits);
    mpfr_abs(r.get(), x, MPFR_RNDU);
    return r;
}

Mpfr rad_abs_down(mpfr_srcptr x) {
    Mpfr r(Ball::kRadiusBits);
    mpfr_abs(r.get(), x, MPFR_RNDD);
    return r;
}

int max_bits(const Ball& a, const Ball& b) { return std::max(a.bits(), b.bits()); }

}  // namespace

Ball::Ball(int bits) : mid_(bits), rad_(kRadiusBits) {}

Ball::Ball(long value, int bits) : mid_(bits), rad_(kRadiusBits) {
    add_rounding(mpfr_set_si(mid_.get(), value, MPFR_RNDN));
}

Ball::Ball(const mpz_class& value, int bits) : mid_(bits), rad_(kRadiusBits) {
    add_rounding(mpfr_set_z(mid_.get(), value.get_mpz_t(), MPFR_RNDN));
}

Ball::Ball(const mpq_class& value, int bits) : mid_(bits), rad_(kRadiusBits) {
    add_rounding(mpfr_set_q(mid_.get(), value.get_mpq_t(), MPFR_RNDN));
}

Ball::Ball(Mpfr mid, Mpfr rad) : mid_(std::move(mid)), rad_(kRadiusBits) {
    mpfr_abs(rad_.get(), rad.get(), MPFR_RNDU);
}

Ball Ball::from_double(double value, int bits) {
    Ball b(bits);
    b.add_rounding(mpfr_set_d(b.mid_.get(), value, MPFR_RNDN));
    return b;
}

Ball Ball::pi(int bits) {
    Ball b(bits);
    b.add_rounding(mpfr_const_pi(b.mid_.get(), MPFR_RNDN));
    return b;
}

void Ball::add_rounding(int inexact) {
    if (inexact == 0 || !mpfr_regular_p(mid_.get())) return;
    Mpfr ulp(kRadiusBits);
    mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid_.get()) - mid_.prec(), MPFR_RNDU);
    mpfr_add(rad_.get(), rad_.get(), ulp.get(), MPFR_RNDU);
}

double Ball::mid_double() const { return mpfr_get_d(mid_.get(), MPFR_RNDN); }
double Ball::rad_double() const { return mpfr_get_d(rad_.get(), MPFR_RNDU); }

double Ball::lower_double() const {
    Mpfr lo(bits() + 8);
    mpfr_sub(lo.get(), mid_.get(), rad_.get(), MPFR_RNDD);
    return mpfr_get_d(lo.get(), MPFR_RNDD);
}

double Ball::upper_double() const {
    Mpfr hi(bits() + 8);
    mpfr_add(hi.get(), mid_.get(), rad_.get(), MPFR_RNDU);
    return mpfr_get_d(hi.get(), MPFR_RNDU);
}

bool Ball::contains(const mpq_class& q) const {
    // |q - mid| <= rad, decided exactly in rationals.
    mpq_class m, r;
    mpfr_get_q(m.get_mpq_t(), mid_.get());
    mpfr_get_q(r.get_mpq_t(), rad_.get());
    return ::abs(mpq_class(q - m)) <= r;
}

int Ball::sign_if_certain() const {
    int s = mpfr_sgn(mid_.get());
    if (s == 0) return 0;
    return mpfr_cmpabs(mid_.get(), rad_.get()) > 0 ? s : 0;
}

std::optional<mpz_class> Ball::floor_if_certain() const {
    Mpfr lo(bits() + 8), hi(bits() + 8);
    mpfr_sub(lo.get(), mid_.get(), rad_.get(), MPFR_RNDD);
    mpfr_add(hi.get(), mid_.get(), rad_.get(), MPFR_RNDU);
    mpz_class n;
    mpfr_get_z(n.get_mpz_t(), lo.get(), MPFR_RNDD);
    if (mpfr_cmp_z(lo.get(), n.get_mpz_t()) <= 0) return std::nullopt;
    mpz_class n1 = n + 1;
    if (mpfr_cmp_z(hi.get(), n1.get_mpz_t()) >= 0) return std::nullopt;
    return n;
}

bool Ball::overlaps(const Ball& other) const {
    Ball d = *this - other;
    return d.sign_if_certain() == 0;
}

Ball Ball::abs() const {
    Ball r = *this;
    mpfr_abs(r.mid_.get(), r.mid_.get(), MPFR_RNDN);
    return r;
}

Ball Ball::with_extra_radius(double err) const {
    Ball r = *this;
    Mpfr e(kRadiusBits);
    mpfr_set_d(e.get(), std::fabs(err), MPFR_RNDU);
    mpfr_add(r.rad_.get(), r.rad_.get(), e.get(), MPFR_RNDU);
    return r;
}

Ball Ball::operator-() const {
    Ball r = *this;
    mpfr_neg(r.mid_.get(), r.mid_.get(), MPFR_RNDN);
    return r;
}

std::string Ball::mid_string(int digits) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", std::max(digits, 1), mid_.get());
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

std::string Ball::to_string(int digits) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.3Rg", rad_.get());
    std::string s = mid_string(digits) + " +/- " + buf;
    mpfr_free_str(buf);
    return s;
}

Ball operator+(const Ball& a, const Ball& b) {
    Ball r(max_bits(a, b));
    int inexact = mpfr_add(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
    mpfr_add(r.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
    r.add_rounding(inexact);
    return r;
}

Ball operator-(const Ball& a, const Ball& b) {
    Ball r(max_bits(a, b));
    int inexact = mpfr_sub(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
    mpfr_add(r.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
    r.add_rounding(inexact);
    return r;
}

Ball operator*(const Ball& a, const Ball& b) {
    Ball r(max_bits(a, b));
    int inexact = mpfr_mul(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
    // |a|rb + |b|ra + ra rb
    Mpfr am = rad_abs_up(a.mid_.get()), bm = rad_abs_up(b.mid_.get()), t(Ball::kRadiusBits);
    mpfr_mul(r.rad_.get(), am.get(), b.rad_.get(), MPFR_RNDU);
    mpfr_mul(t.get(), bm.get(), a.rad_.get(), MPFR_RNDU);
    mpfr_add(r.rad_.get(), r.rad_.get(), t.get(), MPFR_RNDU);
    mpfr_mul(t.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
    mpfr_add(r.rad_.get(), r.rad_.get(), t.get(), MPFR_RNDU);
    r.add_rounding(inexact);
    return r;
}

Ball operator/(const Ball& a, const Ball& b) {
    if (b.sign_if_certain() == 0) throw ZeroDivisor();
    Ball r(max_bits(a, b));
    int inexact = mpfr_div(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
    if (!a.exact() || !b.exact()) {
        // (|am| rb + |bm| ra) / (|bm| (|bm| - rb))
        Mpfr am = rad_abs_up(a.mid_.get()), bm = rad_abs_up(b.mid_.get()), t(Ball::kRadiusBits);
        Mpfr num(Ball::kRadiusBits), den = rad_abs_down(b.mid_.get());
        mpfr_mul(num.get(), am.get(), b.rad_.get(), MPFR_RNDU);
        mpfr_mul(t.get(), bm.get(), a.rad_.get(), MPFR_RNDU);
        mpfr_add(num.get(), num.get(), t.get(), MPFR_RNDU);
        Mpfr gap(b.bits() + 8);
        mpfr_abs(gap.get(), b.mid_.get(), MPFR_RNDN);
        mpfr_sub(gap.get(), gap.get(), b.rad_.get(), MPFR_RNDD);
        Mpfr gap_down(Ball::kRadiusBits);
        mpfr_set(gap_down.get(), gap.get(), MPFR_RNDD);
        mpfr_mul(den.get(), den.get(), gap_down.get(), MPFR_RNDD);
        if (mpfr_sgn(den.get()) <= 0) throw ZeroDivisor();
        mpfr_div(r.rad_.get(), num.get(), den.get(), MPFR_RNDU);
    }
    r.add_rounding(inexact);
    return r;
}

Ball sqrt(const Ball& a) {
    Mpfr lo(a.bits() + 8);
    mpfr_sub(lo.get(), a.mid_.get(), a.rad_.get(), MPFR_RNDD);
    if (mpfr_sgn(lo.get()) < 0) throw DomainViolation("sqrt of a ball reaching below zero");
    Ball r(a.bits());
    int inexact = mpfr_sqrt(r.mid_.get(), a.mid_.get(), MPFR_RNDN);
    if (!a.exact()) {
        // ra / (sqrt(m - ra) + sqrt(m))
        Mpfr s1(Ball::kRadiusBits), s2(Ball::kRadiusBits);
        mpfr_sqrt(s1.get(), lo.get(), MPFR_RNDD);
        mpfr_sqrt(s2.get(), a.mid_.get(), MPFR_RNDD);
        mpfr_add(s1.get(), s1.get(), s2.get(), MPFR_RNDD);
        if (mpfr_sgn(s1.get()) <= 0) throw DomainViolation("sqrt of a ball enclosing zero");
        mpfr_div(r.rad_.get(), a.rad_.get(), s1.get(), MPFR_RNDU);
    }
    r.add_rounding(inexact);
    return r;
}

Ball log(const Ball& a) {
    Mpfr lo(a.bits() + 8);
    mpfr_sub(lo.get(), a.mid_.get(), a.rad_.get(), MPFR_RNDD);
    if (mpfr_sgn(lo.get()) <= 0) throw DomainViolation("log of a ball reaching zero");
    Ball r(a.bits());
    int inexact = mpfr_log(r.mid_.get(), a.mid_.get(), MPFR_RNDN);
    if (!a.exact()) {
        // log m - log(m - r) <= r / (m - r)
        Mpfr lo_down(Ball::kRadiusBits);
        mpfr_set(lo_down.get(), lo.get(), MPFR_RNDD);
        mpfr_div(r.rad_.get(), a.rad_.get(), lo_down.get(), MPFR_RNDU);
    }
    r.add_rounding(inexact);
    return r;
}

Ball exp(const Ball& a) {
    Ball r(a.bits());
    int inexact = mpfr_exp(r.mid_.get(), a.mid_.get(), MPFR_RNDN);
    if (!a.exact()) {
        // exp(m) (exp(r) - 1)
        Mpfr e(Ball::kRadiusBits), t(Ball::kRadiusBits);
        mpfr_exp(e.get(), a.mid_.get(), MPFR_RNDU);
        mpfr_expm1(t.get(), a.rad_.get(), MPFR_RNDU);
        mpfr_mul(r.rad_.get(), e.get(), t.get(), MPFR_RNDU);
    }
    r.add_rounding(inexact);
    return r;
}

Ball pow(const Ball& base, long exponent) {
    if (exponent < 0) return Ball(1L, base.bits()) / pow(base, -exponent);
    Ball result(1L, base.bits()), square = base;
    for (unsigned long e = static_cast<unsigned long>(exponent); e; e >>= 1) {
        if (e & 1) result = result * square;
        if (e > 1) square = square * square;
    }
    return result;
}

int certified_sign(const Ball& x, const PrecisionPolicy& policy, const Refiner& refine) {
    Ball current = x;
    int bits = x.bits();
    for (;;) {
        if (int s = current.sign_if_certain()) return s;
        if (!refine || bits >= policy.max_bits) throw PrecisionExhausted(bits);
        bits = policy.next(bits);
        current = refine(bits);
    }
}

FloorResult certified_floor(const Ball& x, const PrecisionPolicy& policy, const Refiner& refine) {
    Ball current = x;
    int bits = x.bits();
    for (;;) {
        if (auto n = current.floor_if_certain()) {
            Ball frac = current - Ball(*n, current.bits());
            return {*n, frac};
        }
        if (!refine || bits >= policy.max_bits) throw PrecisionExhausted(bits);
        bits = policy.next(bits);
        current = refine(bits);
    }
}

mpq_class rational_from_double(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("non-finite double");
    mpq_class q(value);
    return q;
}

}  // namespace ietlab
