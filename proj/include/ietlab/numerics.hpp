#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ietlab {

class PrecisionExhausted : public std::runtime_error {
public:
    explicit PrecisionExhausted(int bits)
        : std::runtime_error("precision exhausted at " + std::to_string(bits) + " bits"), bits_(bits) {}
    int bits() const { return bits_; }

private:
    int bits_;
};

class DomainViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ZeroDivisor : public std::domain_error {
public:
    ZeroDivisor() : std::domain_error("divisor ball contains zero") {}
};

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PrecisionPolicy {
    int initial_bits = 128;
    int max_bits = 16384;
    int multiplier = 2;

    // IETLAB_PRECISION_BITS overrides initial_bits (max_bits is raised to match if needed).
    static PrecisionPolicy from_environment();
    void validate() const;
    int next(int bits) const;
};

// Owning wrapper around mpfr_t.
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec = 64);
    Mpfr(const Mpfr& other);
    Mpfr(Mpfr&& other) noexcept;
    Mpfr& operator=(const Mpfr& other);
    Mpfr& operator=(Mpfr&& other) noexcept;
    ~Mpfr();

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(value_); }

private:
    mpfr_t value_;
};

// Midpoint-radius enclosure of a real number.
class Ball {
public:
    static constexpr mpfr_prec_t kRadiusBits = 64;

    Ball() : Ball(128) {}
    explicit Ball(int bits);
    Ball(long value, int bits);
    Ball(const mpz_class& value, int bits);
    Ball(const mpq_class& value, int bits);
    Ball(Mpfr mid, Mpfr rad);

    static Ball from_double(double value, int bits);
    static Ball pi(int bits);

    int bits() const { return static_cast<int>(mid_.prec()); }
    mpfr_srcptr mid() const { return mid_.get(); }
    mpfr_srcptr rad() const { return rad_.get(); }
    double mid_double() const;
    double rad_double() const;
    double lower_double() const;
    double upper_double() const;

    bool exact() const { return mpfr_zero_p(rad_.get()) != 0; }
    bool contains(const mpq_class& q) const;
    bool contains_zero() const { return sign_if_certain() == 0; }
    // +1 / -1 when the whole ball lies on one side of zero, else 0.
    int sign_if_certain() const;
    // floor(x) when [mid-rad, mid+rad] lies strictly inside (n, n+1).
    std::optional<mpz_class> floor_if_certain() const;
    bool overlaps(const Ball& other) const;

    Ball abs() const;
    Ball with_extra_radius(double err) const;
    Ball operator-() const;

    std::string mid_string(int digits) const;
    std::string to_string(int digits = 20) const;

    friend Ball operator+(const Ball& a, const Ball& b);
    friend Ball operator-(const Ball& a, const Ball& b);
    friend Ball operator*(const Ball& a, const Ball& b);
    friend Ball operator/(const Ball& a, const Ball& b);
    friend Ball sqrt(const Ball& a);
    friend Ball log(const Ball& a);
    friend Ball exp(const Ball& a);

private:
    void add_rounding(int inexact);

    Mpfr mid_;
    Mpfr rad_;
};

inline Ball operator+(const Ball& a, long b) { return a + Ball(b, a.bits()); }
inline Ball operator-(const Ball& a, long b) { return a - Ball(b, a.bits()); }
inline Ball operator*(const Ball& a, long b) { return a * Ball(b, a.bits()); }
inline Ball operator/(const Ball& a, long b) { return a / Ball(b, a.bits()); }
inline Ball operator+(long a, const Ball& b) { return Ball(a, b.bits()) + b; }
inline Ball operator-(long a, const Ball& b) { return Ball(a, b.bits()) - b; }
inline Ball operator*(long a, const Ball& b) { return Ball(a, b.bits()) * b; }
inline Ball operator/(long a, const Ball& b) { return Ball(a, b.bits()) / b; }
Ball pow(const Ball& base, long exponent);

using Refiner = std::function<Ball(int bits)>;

// Sign of the true value; recomputes through refine at doubled precision while 0 is enclosed.
int certified_sign(const Ball& x, const PrecisionPolicy& policy, const Refiner& refine);

struct FloorResult {
    mpz_class integer;
    Ball fractional;
};

FloorResult certified_floor(const Ball& x, const PrecisionPolicy& policy, const Refiner& refine);

// A real number that can be evaluated to any precision, optionally with a known exact rational value.
class Real {
public:
    using Evaluator = std::function<Ball(int bits)>;

    Real();
    Real(Evaluator eval, std::string label, std::optional<mpq_class> exact = std::nullopt);
    Real(const mpq_class& value);
    Real(long value);
    Real(int value) : Real(static_cast<long>(value)) {}
    Real(double) = delete;

    static Real parse(std::string_view expression);
    static Real pi();

    Ball at(int bits) const { return (*eval_)(bits); }
    const std::optional<mpq_class>& exact() const { return exact_; }
    const std::string& label() const { return label_; }
    double approx() const;

    Real operator-() const;
    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    friend Real sqrt(const Real& a);
    friend Real pow(const Real& a, long exponent);

private:
    std::shared_ptr<const Evaluator> eval_;
    std::string label_;
    std::optional<mpq_class> exact_;
};

// Exact rational from a decimal literal such as "0.35", "-2", "1.5e-3" or "3/8".
mpq_class parse_rational(std::string_view text);
// Exact binary value of a double.
mpq_class rational_from_double(double value);

// Runs attempt(bits) at initial_bits, doubling while it returns nullopt; throws PrecisionExhausted past max_bits.
template <class F>
auto escalate(const PrecisionPolicy& policy, F&& attempt) -> typename decltype(attempt(0))::value_type {
    for (int bits = policy.initial_bits;; bits = policy.next(bits)) {
        if (auto result = attempt(bits)) return *result;
        if (bits >= policy.max_bits) throw PrecisionExhausted(bits);
    }
}

}  // namespace ietlab
