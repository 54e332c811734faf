#include "ietlab/numerics.hpp"

namespace ietlab {

namespace {

std::shared_ptr<const Real::Evaluator> wrap(Real::Evaluator f) {
    return std::make_shared<const Real::Evaluator>(std::move(f));
}

std::string paren(const std::string& s) {
    for (char c : s)
        if (c == '+' || c == '-' || c == '*' || c == '/' || c == ' ') return "(" + s + ")";
    return s;
}

}  // namespace

Real::Real() : Real(mpq_class(0)) {}

Real::Real(Evaluator eval, std::string label, std::optional<mpq_class> exact)
    : eval_(wrap(std::move(eval))), label_(std::move(label)), exact_(std::move(exact)) {}

Real::Real(const mpq_class& value) : label_(value.get_str()), exact_(value) {
    exact_->canonicalize();
    mpq_class v = *exact_;
    eval_ = wrap([v](int bits) { return Ball(v, bits); });
}

Real::Real(long value) : Real(mpq_class(value)) {}

Real Real::pi() {
    return Real([](int bits) { return Ball::pi(bits); }, "pi");
}

double Real::approx() const {
    if (exact_) return exact_->get_d();
    return at(64).mid_double();
}

Real Real::operator-() const {
    if (exact_) return Real(mpq_class(-*exact_));
    auto self = *this;
    return Real([self](int bits) { return -self.at(bits); }, "-" + paren(label_));
}

Real operator+(const Real& a, const Real& b) {
    if (a.exact_ && b.exact_) return Real(mpq_class(*a.exact_ + *b.exact_));
    return Real([a, b](int bits) { return a.at(bits) + b.at(bits); }, a.label_ + " + " + b.label_);
}

Real operator-(const Real& a, const Real& b) {
    if (a.exact_ && b.exact_) return Real(mpq_class(*a.exact_ - *b.exact_));
    return Real([a, b](int bits) { return a.at(bits) - b.at(bits); }, a.label_ + " - " + paren(b.label_));
}

Real operator*(const Real& a, const Real& b) {
    if (a.exact_ && b.exact_) return Real(mpq_class(*a.exact_ * *b.exact_));
    return Real([a, b](int bits) { return a.at(bits) * b.at(bits); }, paren(a.label_) + "*" + paren(b.label_));
}

Real operator/(const Real& a, const Real& b) {
    if (a.exact_ && b.exact_) {
        if (*b.exact_ == 0) throw ZeroDivisor();
        return Real(mpq_class(*a.exact_ / *b.exact_));
    }
    return Real([a, b](int bits) { return a.at(bits) / b.at(bits); }, paren(a.label_) + "/" + paren(b.label_));
}

Real sqrt(const Real& a) {
    if (a.exact_) {
        if (*a.exact_ < 0) throw DomainViolation("sqrt of a negative number");
        mpz_class num = a.exact_->get_num(), den = a.exact_->get_den();
        if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t()))
            return Real(mpq_class(mpz_class(sqrt(num)), mpz_class(sqrt(den))));
    }
    return Real([a](int bits) { return sqrt(a.at(bits)); }, "sqrt(" + a.label_ + ")");
}

Real pow(const Real& a, long exponent) {
    if (a.exact_) {
        if (*a.exact_ == 0 && exponent < 0) throw ZeroDivisor();
        mpz_class num, den;
        unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
        mpz_pow_ui(num.get_mpz_t(), a.exact_->get_num_mpz_t(), e);
        mpz_pow_ui(den.get_mpz_t(), a.exact_->get_den_mpz_t(), e);
        mpq_class q(num, den);
        if (exponent < 0) q = 1 / q;
        return Real(q);
    }
    return Real([a, exponent](int bits) { return pow(a.at(bits), exponent); },
                paren(a.label_) + "^" + std::to_string(exponent));
}

}  // namespace ietlab
