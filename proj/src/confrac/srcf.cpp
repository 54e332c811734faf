#include "ietlab/confrac.hpp"

#include <cmath>
#include <stdexcept>

namespace ietlab {

namespace {

void check_term(const SrcfTerm& t) {
    if (t.eps != 1 && t.eps != -1) throw std::invalid_argument("SRCF numerators must be +1 or -1");
}

}  // namespace

Ball srcf_eval(const Srcf& s, std::size_t depth, int bits) {
    if (depth > s.size()) throw std::invalid_argument("SRCF depth exceeds the number of terms");
    Ball tail(bits);
    for (std::size_t k = depth; k-- > 0;) {
        check_term(s[k]);
        Ball denom = tail + s[k].a;
        if (denom.contains_zero()) throw DivisionByZeroTail("SRCF tail denominator is not certified nonzero");
        tail = Ball(static_cast<long>(s[k].eps), bits) / denom;
    }
    return tail;
}

mpq_class srcf_value(const Srcf& s, std::size_t depth) {
    if (depth > s.size()) throw std::invalid_argument("SRCF depth exceeds the number of terms");
    mpq_class tail = 0;
    for (std::size_t k = depth; k-- > 0;) {
        check_term(s[k]);
        mpq_class denom = tail + s[k].a;
        if (denom == 0) throw DivisionByZeroTail("SRCF tail denominator is zero");
        tail = s[k].eps / denom;
        tail.canonicalize();
    }
    return tail;
}

mpq_class srcf_value(const Srcf& s) { return srcf_value(s, s.size()); }

Srcf srcf_of_expansion(const std::vector<ExpansionTriple>& triples) {
    Srcf out{{1, 2}};
    for (std::size_t k = 0; k < triples.size(); ++k) {
        int eps = k == 0 ? 1 : triples[k - 1].eps;
        out.push_back({eps, triples[k].n + triples[k].m});
    }
    return out;
}

Srcf srcf_of_expansion(const ExpansionSeq& seq) { return srcf_of_expansion(seq.triples); }

mpq_class singularized_value(const mpq_class& a, const mpq_class& b, const mpq_class& x) {
    mpq_class inner = b - 1 + x;
    if (inner == 0) throw DivisionByZeroTail("b - 1 + x vanishes");
    mpq_class mid = 1 + 1 / inner;
    mpq_class r = a - 1 + 1 / mid;
    r.canonicalize();
    return r;
}

namespace {

// Appends a digit, collapsing [x, 0, y] into [x + y].
void push_digit(Digits& out, long d) {
    if (out.size() >= 2 && out.back() == 0) {
        out.pop_back();
        out.back() += d;
    } else {
        out.push_back(d);
    }
}

}  // namespace

RcfConversion srcf_to_rcf(const Srcf& s) {
    if (s.empty()) throw std::invalid_argument("empty SRCF");
    for (const auto& t : s) check_term(t);
    if (s[0].eps != 1) throw DomainViolation("SRCF with a negative leading numerator has a negative value");
    RcfConversion r;
    Digits& out = r.digits;
    long current = s[0].a;
    for (std::size_t k = 1; k < s.size(); ++k) {
        if (s[k].eps > 0) {
            push_digit(out, current);
            current = s[k].a;
        } else {
            // c - 1/(b + x) = (c - 1) + 1/(1 + 1/((b - 1) + x))
            push_digit(out, current - 1);
            push_digit(out, 1);
            current = s[k].a - 1;
        }
    }
    push_digit(out, current);
    // a trailing 0 is an infinite partial quotient: [.., x, d, 0] = [.., x]
    while (!out.empty() && out.back() == 0) {
        out.pop_back();
        if (out.empty()) break;
        out.pop_back();
    }
    while (out.size() >= 2 && out.back() == 1) {
        out.pop_back();
        out.back() += 1;
    }
    if (out.empty() || out.front() < 1) throw DomainViolation("SRCF value is not in (0, 1)");
    for (long d : out)
        if (d < 1) throw DomainViolation("SRCF conversion produced a nonpositive digit");
    std::size_t last = s.size() - 1;
    r.open_run = s[last].eps < 0 && s[last].a == 2;
    return r;
}

WindowBoundCheck window_bound_from_expansion(const std::vector<ExpansionTriple>& triples, double c0, std::size_t s,
                                             std::size_t burn_in) {
    WindowBoundCheck r;
    r.window = check_window_condition(triples, c0, s);
    r.rcf = srcf_to_rcf(srcf_of_expansion(triples)).digits;
    r.product = window_product_check(r.rcf, std::sqrt(2 * c0 / 3), 2 * s, burn_in);
    return r;
}

}  // namespace ietlab
