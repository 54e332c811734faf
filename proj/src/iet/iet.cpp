#include "ietlab/iet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ietlab {

IETState::IETState(ParamPoint params, const PrecisionPolicy& policy) : params_(std::move(params)) {
    require_in_simplex(params_, policy);
    if (params_.alpha.exact() && params_.beta.exact()) {
        exact_alpha_ = *params_.alpha.exact();
        exact_beta_ = *params_.beta.exact();
    }
}

IETState::Cuts IETState::cuts(int bits) const {
    Ball a = params_.alpha.at(bits), b = params_.beta.at(bits);
    return {a, b, a + b};
}

namespace {

// -1 if x < c, +1 if x >= c, 0 if undecided. An exactly zero difference counts as x >= c.
int compare(const Ball& x, const Ball& c) {
    Ball d = x - c;
    if (d.exact() && mpfr_zero_p(d.mid())) return 1;
    int s = d.sign_if_certain();
    return s == 0 ? 0 : (s < 0 ? -1 : 1);
}

int inverse_piece(const IETState::Cuts& c, const Ball& y) {
    // pieces of T^-1: [0,1-a-b) -> +a+b, [1-a-b,1-a) -> +2a+b-1, [1-a,1) -> +a-1
    Ball first = 1 - c.alpha_beta, second = 1 - c.alpha;
    int s1 = compare(y, first);
    if (s1 == 0) return 0;
    if (s1 < 0) return 1;
    int s2 = compare(y, second);
    if (s2 == 0) return 0;
    return s2 < 0 ? 2 : 3;
}

Ball translate(const IETState::Cuts& c, const Ball& x, int piece, Direction dir) {
    if (dir == Direction::Forward) {
        switch (piece) {
            case 1: return x + (1 - c.alpha);
            case 2: return x + (1 - 2 * c.alpha - c.beta);
            default: return x - c.alpha_beta;
        }
    }
    switch (piece) {
        case 1: return x + c.alpha_beta;
        case 2: return x + (2 * c.alpha + c.beta - 1);
        default: return x - (1 - c.alpha);
    }
}

int exact_inverse_piece(const mpq_class& a, const mpq_class& b, const mpq_class& y) {
    if (y < 1 - a - b) return 1;
    if (y < 1 - a) return 2;
    return 3;
}

}  // namespace

int symbol_at(const IETState::Cuts& cuts, const Ball& x) {
    int s1 = compare(x, cuts.alpha);
    if (s1 == 0) return 0;
    if (s1 < 0) return 1;
    int s2 = compare(x, cuts.alpha_beta);
    if (s2 == 0) return 0;
    return s2 < 0 ? 2 : 3;
}

int symbol_at(const IETState& state, const mpq_class& x) {
    if (!state.exact()) throw std::logic_error("exact symbol lookup needs exact parameters");
    if (x < state.exact_alpha()) return 1;
    if (x < state.exact_alpha() + state.exact_beta()) return 2;
    return 3;
}

Ball apply_T(const IETState& state, const Ball& x, Direction dir) {
    IETState::Cuts c = state.cuts(x.bits());
    int piece = dir == Direction::Forward ? symbol_at(c, x) : inverse_piece(c, x);
    if (piece == 0) throw BranchAmbiguous("point straddles a discontinuity: " + x.to_string(12));
    return translate(c, x, piece, dir);
}

mpq_class apply_T(const IETState& state, const mpq_class& x, Direction dir) {
    const mpq_class &a = state.exact_alpha(), &b = state.exact_beta();
    mpq_class r;
    if (dir == Direction::Forward) {
        switch (symbol_at(state, x)) {
            case 1: r = x + 1 - a; break;
            case 2: r = x + 1 - 2 * a - b; break;
            default: r = x - a - b;
        }
    } else {
        switch (exact_inverse_piece(a, b, x)) {
            case 1: r = x + a + b; break;
            case 2: r = x + 2 * a + b - 1; break;
            default: r = x - 1 + a;
        }
    }
    r.canonicalize();
    return r;
}

Coding code_trajectory(const IETState& state, const Real& x, std::size_t steps, const PrecisionPolicy& policy) {
    Coding out;
    if (state.exact() && x.exact()) {
        mpq_class p = *x.exact();
        for (std::size_t n = 0; n < steps; ++n) {
            out.symbols.push_back(symbol_at(state, p));
            out.values.push_back(p.get_d());
            p = apply_T(state, p);
        }
        return out;
    }
    for (int bits = policy.initial_bits;; bits = policy.next(bits)) {
        out = Coding{};
        IETState::Cuts c = state.cuts(bits);
        Ball p = x.at(bits);
        for (std::size_t n = 0; n < steps; ++n) {
            int s = symbol_at(c, p);
            if (s == 0) {
                out.ambiguous_at = n;
                break;
            }
            out.symbols.push_back(s);
            out.values.push_back(p.mid_double());
            p = translate(c, p, s, Direction::Forward);
        }
        if (!out.ambiguous_at || bits >= policy.max_bits) return out;
    }
}

const char* to_string(IdocEvidence::Status s) {
    switch (s) {
        case IdocEvidence::Status::Ok: return "ok";
        case IdocEvidence::Status::Violation: return "violation";
        case IdocEvidence::Status::Ambiguous: return "ambiguous";
    }
    return "?";
}

namespace {

IdocEvidence exact_idoc(const IETState& state, std::size_t depth) {
    IdocEvidence ev;
    std::map<mpq_class, std::pair<int, std::size_t>> seen;
    mpq_class p[2] = {state.exact_alpha(), state.exact_alpha() + state.exact_beta()};
    for (std::size_t n = 0; n < depth; ++n) {
        for (int orbit = 0; orbit < 2; ++orbit) {
            auto [it, fresh] = seen.emplace(p[orbit], std::make_pair(orbit, n));
            if (!fresh) {
                ev.status = IdocEvidence::Status::Violation;
                ev.indices = {it->second, {orbit, n}};
                return ev;
            }
        }
        for (auto& q : p) q = apply_T(state, q, Direction::Inverse);
    }
    return ev;
}

}  // namespace

IdocEvidence idoc_evidence(const IETState& state, std::size_t depth, double separation_tol,
                           const PrecisionPolicy& policy) {
    if (state.exact()) return exact_idoc(state, depth);
    IdocEvidence ev;
    for (int bits = policy.initial_bits;; bits = policy.next(bits)) {
        ev = IdocEvidence{};
        ev.bits = bits;
        IETState::Cuts c = state.cuts(bits);
        std::vector<Ball> points;
        std::vector<std::pair<int, std::size_t>> tags;
        Ball p[2] = {c.alpha, c.alpha_beta};
        bool hit = false, straddle = false;
        for (std::size_t n = 0; n < depth && !straddle; ++n) {
            for (int orbit = 0; orbit < 2; ++orbit) {
                points.push_back(p[orbit]);
                tags.push_back({orbit, n});
                if (n + 1 == depth) continue;
                int piece = inverse_piece(c, p[orbit]);
                if (piece == 0) {
                    // the next preimage is undefined at this precision
                    ev.indices = {{orbit, n}, {2, 0}};
                    straddle = true;
                    break;
                }
                p[orbit] = translate(c, p[orbit], piece, Direction::Inverse);
            }
        }
        hit = straddle;
        if (!hit) {
            std::vector<std::size_t> order(points.size());
            std::iota(order.begin(), order.end(), 0);
            std::vector<double> mids(points.size());
            for (std::size_t i = 0; i < points.size(); ++i) mids[i] = points[i].mid_double();
            std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return mids[i] < mids[j]; });
            const double window = std::max(1e-9, separation_tol);
            for (std::size_t i = 0; i < order.size() && !hit; ++i) {
                for (std::size_t j = i + 1; j < order.size() && mids[order[j]] - mids[order[i]] <= window; ++j) {
                    const Ball &u = points[order[i]], &v = points[order[j]];
                    Ball d = u - v;
                    double tol = separation_tol > 0 ? separation_tol : 2 * (u.rad_double() + v.rad_double());
                    if (std::fabs(d.mid_double()) <= tol || d.sign_if_certain() == 0) {
                        ev.indices = {tags[order[i]], tags[order[j]]};
                        hit = true;
                        break;
                    }
                }
            }
        }
        if (!hit) return ev;
        if (bits >= policy.max_bits) {
            ev.status = IdocEvidence::Status::Ambiguous;
            return ev;
        }
        // A fixed tolerance does not shrink with precision, so escalating would not change the verdict.
        if (!straddle && separation_tol > 0) {
            ev.status = IdocEvidence::Status::Violation;
            return ev;
        }
    }
}

double verify_induction(const IETState& state, std::size_t samples, const PrecisionPolicy& policy) {
    const int bits = policy.initial_bits;
    IETState::Cuts c = state.cuts(bits);
    Ball scale = 1 + c.beta;
    Ball rot = (1 - c.alpha) / scale;  // A
    Ball top = Ball(1L, bits) / scale;  // B
    Ball wrap = 1 - rot;
    const double golden = (std::sqrt(5.0) - 1) / 2;
    double worst = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        double frac = std::fmod((i + 1) * golden, 1.0);
        Ball x(rational_from_double(frac), bits);
        Ball tx = apply_T(state, x, Direction::Forward);
        Ball v = x / scale;
        std::size_t steps = 0;
        for (int inside = 0; inside >= 0;) {
            int w = compare(v, wrap);
            if (w == 0) throw BranchAmbiguous("rotation orbit straddles 1 - A");
            v = w < 0 ? v + rot : v + rot - 1;
            if (++steps > 1000000) throw ReturnTimeExceeded("no return to [0, B) within 10^6 steps");
            inside = compare(v, top);
            if (inside == 0) throw BranchAmbiguous("rotation orbit straddles B");
        }
        Ball d = scale * v - tx;
        worst = std::max(worst, std::fabs(d.mid_double()) + d.rad_double());
    }
    return worst;
}

}  // namespace ietlab
