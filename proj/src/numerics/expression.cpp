#include "ietlab/numerics.hpp"

#include <cctype>

namespace ietlab {

mpq_class parse_rational(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpq_class num = parse_rational(s.substr(0, slash));
        mpq_class den = parse_rational(s.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + s + "'");
        return num / den;
    }
    size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
    std::string digits;
    long scale = 0;
    bool seen_digit = false, seen_point = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            seen_digit = true;
            if (seen_point) ++scale;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw ParseError("not a number: '" + s + "'");
    long exponent = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        size_t used = 0;
        try {
            exponent = std::stol(s.substr(i), &used);
        } catch (const std::exception&) {
            throw ParseError("bad exponent in '" + s + "'");
        }
        i += used;
    }
    if (i != s.size()) throw ParseError("trailing characters in '" + s + "'");
    long shift = exponent - scale;
    if (shift > 100000 || shift < -100000) throw ParseError("exponent out of range in '" + s + "'");
    mpz_class num(digits, 10), pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    mpq_class q = shift >= 0 ? mpq_class(num * pow10) : mpq_class(num, pow10);
    q.canonicalize();
    return negative ? mpq_class(-q) : q;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Real parse() {
        Real r = expr();
        skip();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression '" + std::string(src_) + "' at " + std::to_string(pos_) + ": " + what);
    }

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool eat_word(std::string_view w) {
        skip();
        if (src_.substr(pos_, w.size()) != w) return false;
        size_t end = pos_ + w.size();
        if (end < src_.size() && std::isalnum(static_cast<unsigned char>(src_[end]))) return false;
        pos_ = end;
        return true;
    }

    Real expr() {
        Real lhs = term();
        for (;;) {
            if (eat('+')) lhs = lhs + term();
            else if (eat('-')) lhs = lhs - term();
            else return lhs;
        }
    }

    Real term() {
        Real lhs = unary();
        for (;;) {
            if (eat('*')) lhs = lhs * unary();
            else if (eat('/')) lhs = lhs / unary();
            else return lhs;
        }
    }

    Real unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    Real power() {
        Real base = primary();
        if (!eat('^')) return base;
        skip();
        size_t start = pos_;
        if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) ++pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::string e(src_.substr(start, pos_ - start));
        if (e.empty() || e == "-" || e == "+") fail("integer exponent expected");
        return pow(base, std::stol(e));
    }

    Real primary() {
        if (eat('(')) {
            Real r = expr();
            if (!eat(')')) fail("')' expected");
            return r;
        }
        if (eat_word("pi")) return Real::pi();
        if (eat_word("sqrt")) {
            if (!eat('(')) fail("'(' expected after sqrt");
            Real r = expr();
            if (!eat(')')) fail("')' expected");
            return sqrt(r);
        }
        skip();
        size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t save = pos_++;
            if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        if (start == pos_) fail("number, 'pi', 'sqrt' or '(' expected");
        return Real(parse_rational(src_.substr(start, pos_ - start)));
    }

    std::string_view src_;
    size_t pos_ = 0;
};

}  // namespace

Real Real::parse(std::string_view expression) {
    Real r = Parser(expression).parse();
    return Real([r](int bits) { return r.at(bits); }, std::string(expression), r.exact());
}

}  // namespace ietlab
