#include "ietlab/expansion.hpp"

#include <climits>

namespace ietlab {

namespace {

struct Attempt {
    std::vector<ExpansionTriple> triples;
    std::optional<Degeneracy> failure;
};

std::optional<long> small_floor(const Ball& v) {
    auto n = v.floor_if_certain();
    if (!n || !n->fits_slong_p()) return std::nullopt;
    return n->get_si();
}

Attempt expand_at(const ParamPoint& p, std::size_t depth, int bits) {
    Attempt out;
    auto fail = [&](std::size_t index, const char* why) {
        out.failure = Degeneracy{index, bits, why};
        return out;
    };
    Ball a = p.alpha.at(bits), b = p.beta.at(bits);
    Ball rest = 1 - a;
    Ball x = (rest - b) / rest, y = (1 - 2 * a) / rest;
    long pending_n = 0, pending_m = 0;
    for (std::size_t k = 0;; ++k) {
        Ball s = x + y - 1;
        int eps = s.sign_if_certain();
        if (eps == 0) return fail(k + 1, "sign of x + y - 1 not certified");
        if (k == 0) {
            if (eps != -1) throw std::logic_error("first sign must be -1 inside D");
        } else {
            out.triples.push_back({pending_n, pending_m, eps});
        }
        if (out.triples.size() >= depth) return out;
        Ball big_x(bits), big_y(bits);
        if (eps > 0) {
            big_x = y / s;
            big_y = x / s;
        } else {
            Ball u = -s;
            big_x = (1 - y) / u;
            big_y = (1 - x) / u;
        }
        auto n = small_floor(big_x);
        if (!n) return fail(k + 1, "integer part n not certified");
        auto m = small_floor(big_y);
        if (!m) return fail(k + 1, "integer part m not certified");
        x = big_x - *n;
        y = big_y - *m;
        pending_n = *n;
        pending_m = *m;
    }
}

}  // namespace

ExpansionSeq expand_in_D(const ParamPoint& p, std::size_t depth, const PrecisionPolicy& policy) {
    policy.validate();
    if (region_of(p, policy) != Region::InD) throw DomainViolation("expand_in_D needs a point certified inside D");
    ExpansionSeq seq;
    if (depth == 0) return seq;
    for (int bits = policy.initial_bits;; bits = policy.next(bits)) {
        Attempt at = expand_at(p, depth, bits);
        if (!at.failure || bits >= policy.max_bits) {
            seq.triples = std::move(at.triples);
            seq.degeneracy = std::move(at.failure);
            return seq;
        }
    }
}

ExpansionSeq full_expansion(const ParamPoint& p, std::size_t depth, const PrecisionPolicy& policy) {
    Reduction red = reduce_to_D(p, 10000, policy);
    if (red.status != Reduction::Status::Reduced) {
        ExpansionSeq seq;
        seq.reduction = red.record;
        seq.degeneracy = Degeneracy{0, policy.max_bits,
                                    red.status == Reduction::Status::OnRationalLine ? "reduction hit a rational line"
                                                                                    : "reduction step limit exceeded"};
        return seq;
    }
    ExpansionSeq seq = expand_in_D(red.point, depth, policy);
    seq.reduction = std::move(red.record);
    return seq;
}

ValidityReport validate_expansion(const std::vector<ExpansionTriple>& triples) {
    ValidityReport r;
    r.length = triples.size();
    for (const auto& t : triples) {
        if (t.n < 1 || t.m < 1 || (t.eps != 1 && t.eps != -1)) r.digits_ok = false;
        if (t.n == 1 && t.eps == 1) ++r.forbidden_n;
        if (t.m == 1 && t.eps == 1) ++r.forbidden_m;
    }
    if (r.length > 0) {
        r.forbidden_n_frequency = static_cast<double>(r.forbidden_n) / r.length;
        r.forbidden_m_frequency = static_cast<double>(r.forbidden_m) / r.length;
    }
    r.admissible_so_far = r.digits_ok && r.length > 0 && r.forbidden_n < r.length && r.forbidden_m < r.length;
    return r;
}

std::pair<Ball, Ball> backward_point(const std::vector<ExpansionTriple>& triples, int bits, std::size_t extra) {
    std::vector<ExpansionTriple> ext = triples;
    for (std::size_t i = 0; i < extra; ++i) ext.push_back(triples.back());
    Ball x(mpq_class(1, 2), bits), y(mpq_class(1, 2), bits);
    for (std::size_t k = ext.size(); k-- > 0;) {
        // (x_{k+1}, y_{k+1}) -> (x_k, y_k) with digits of triple k+1 and the sign stored in triple k
        int eps = k == 0 ? -1 : ext[k - 1].eps;
        Ball big_x = x + ext[k].n, big_y = y + ext[k].m;
        Ball w = big_x + big_y - 1;
        if (eps > 0) {
            y = big_x / w;
            x = big_y / w;
        } else {
            y = 1 - big_x / w;
            x = 1 - big_y / w;
        }
    }
    return {x, y};
}

namespace {

std::pair<Ball, Ball> point_balls(const std::vector<ExpansionTriple>& triples, int bits) {
    auto [x0, y0] = backward_point(triples, bits);
    Ball alpha = (1 - y0) / (2 - y0);
    Ball beta = (1 - alpha) * (1 - x0);
    return {alpha, beta};
}

}  // namespace

ParamPoint point_from_expansion(const std::vector<ExpansionTriple>& triples, const PrecisionPolicy& policy) {
    if (triples.empty()) throw InadmissiblePrefix("empty digit prefix");
    for (const auto& t : triples)
        if (t.n < 1 || t.m < 1 || (t.eps != 1 && t.eps != -1))
            throw InadmissiblePrefix("digits must be >= 1 and signs +-1");
    int bits = policy.initial_bits;
    auto [a, b] = point_balls(triples, bits);
    Mpfr tol(64);
    mpfr_set_ui_2exp(tol.get(), 1, -bits / 2, MPFR_RNDN);
    if (mpfr_cmp(a.rad(), tol.get()) > 0 || mpfr_cmp(b.rad(), tol.get()) > 0)
        throw NonContraction("backward iteration did not contract to 2^-" + std::to_string(bits / 2));
    std::string tag = "expansion point (" + std::to_string(triples.size()) + " triples)";
    Real alpha([triples](int bits) { return point_balls(triples, bits).first; }, tag + ".alpha");
    Real beta([triples](int bits) { return point_balls(triples, bits).second; }, tag + ".beta");
    return {alpha, beta};
}

}  // namespace ietlab
