#include "ietlab/expansion.hpp"

namespace ietlab {

ParamPoint ParamPoint::parse(std::string_view alpha, std::string_view beta) {
    return {Real::parse(alpha), Real::parse(beta)};
}

const char* to_string(Region r) {
    switch (r) {
        case Region::InD: return "InD";
        case Region::NeedsG: return "NeedsG";
        case Region::NeedsF: return "NeedsF";
        case Region::OnRationalLine: return "OnRationalLine";
    }
    return "?";
}

const char* to_string(MapKind m) {
    switch (m) {
        case MapKind::F: return "F";
        case MapKind::G: return "G";
        case MapKind::FInv: return "F_inv";
        case MapKind::GInv: return "G_inv";
    }
    return "?";
}

ReductionRecord ReductionRecord::from_steps(std::vector<MapKind> steps) {
    ReductionRecord rec;
    rec.steps = std::move(steps);
    if (rec.steps.empty()) return rec;
    rec.prefix_s = rec.steps.front() == MapKind::G ? 1 : 0;
    rec.suffix_t = rec.steps.back() == MapKind::G ? 1 : 0;
    // f_powers[0] is the run nearest the output, i.e. applied last.
    long run = 0;
    for (auto it = rec.steps.rbegin(); it != rec.steps.rend(); ++it) {
        if (*it == MapKind::F) {
            ++run;
        } else if (run > 0) {
            rec.f_powers.push_back(run);
            run = 0;
        }
    }
    if (run > 0) rec.f_powers.push_back(run);
    return rec;
}

int decide_sign(const Real& r, const PrecisionPolicy& policy) {
    if (r.exact()) return sgn(*r.exact());
    try {
        return certified_sign(r.at(policy.initial_bits), policy, [&r](int bits) { return r.at(bits); });
    } catch (const PrecisionExhausted&) {
        return 0;
    }
}

void require_in_simplex(const ParamPoint& p, const PrecisionPolicy& policy) {
    if (decide_sign(p.alpha, policy) <= 0 || decide_sign(p.beta, policy) <= 0 ||
        decide_sign(Real(1) - p.alpha - p.beta, policy) <= 0)
        throw DomainViolation("point is not certified inside the open simplex 0 < alpha, 0 < beta, alpha + beta < 1");
}

Region region_of(const ParamPoint& p, const PrecisionPolicy& policy) {
    require_in_simplex(p, policy);
    int half = decide_sign(p.alpha - Real(mpq_class(1, 2)), policy);
    if (half > 0) return Region::NeedsF;
    if (half == 0) return Region::OnRationalLine;
    int diag = decide_sign(Real(2) * p.alpha + p.beta - Real(1), policy);
    if (diag < 0) return Region::NeedsG;
    if (diag > 0) return Region::InD;
    return Region::OnRationalLine;
}

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw DomainViolation(what);
}

void require_unit_square(const ParamPoint& p, const PrecisionPolicy& policy) {
    require(decide_sign(p.alpha, policy) > 0 && decide_sign(Real(1) - p.alpha, policy) > 0 &&
                decide_sign(p.beta, policy) > 0 && decide_sign(Real(1) - p.beta, policy) > 0,
            "point is not certified inside the open unit square");
}

template <class T>
std::pair<T, T> step(MapKind which, const T& x, const T& y) {
    switch (which) {
        case MapKind::F: return {(2 * x - 1) / x, y / x};
        case MapKind::G:
        case MapKind::GInv: return {1 - x - y, y};
        case MapKind::FInv: {
            T d = 2 - x;
            return {1 / d, y / d};
        }
    }
    throw std::logic_error("unknown map");
}

std::pair<Ball, Ball> replay_balls(const ParamPoint& p, const std::vector<MapKind>& steps, int bits) {
    Ball a = p.alpha.at(bits), b = p.beta.at(bits);
    for (MapKind s : steps) std::tie(a, b) = step(s, a, b);
    return {a, b};
}

}  // namespace

ParamPoint apply_map(MapKind which, const ParamPoint& p, const PrecisionPolicy& policy) {
    require_unit_square(p, policy);
    if (which == MapKind::F)
        require(decide_sign(p.alpha - Real(mpq_class(1, 2)), policy) > 0, "F needs first coordinate > 1/2");
    if (which == MapKind::G || which == MapKind::GInv)
        require(decide_sign(Real(1) - p.alpha - p.beta, policy) > 0, "G needs x + y < 1");
    auto [x, y] = step(which, p.alpha, p.beta);
    return {x, y};
}

std::array<double, 4> inverse_map_jacobian(MapKind which, double x, double y) {
    switch (which) {
        case MapKind::FInv: {
            double d = 2 - x;
            return {1 / (d * d), 0.0, y / (d * d), 1 / d};
        }
        case MapKind::GInv:
        case MapKind::G: return {-1.0, -1.0, 0.0, 1.0};
        case MapKind::F: break;
    }
    throw std::invalid_argument("jacobian is provided for the inverse maps only");
}

ParamPoint replay(const ParamPoint& p, const std::vector<MapKind>& steps) {
    if (steps.empty()) return p;
    if (p.alpha.exact() && p.beta.exact()) {
        mpq_class a = *p.alpha.exact(), b = *p.beta.exact();
        for (MapKind s : steps) {
            auto [na, nb] = step<mpq_class>(s, a, b);
            a = na;
            b = nb;
            a.canonicalize();
            b.canonicalize();
        }
        return {Real(a), Real(b)};
    }
    std::string tag = "H(" + p.alpha.label() + ", " + p.beta.label() + ")";
    Real a([p, steps](int bits) { return replay_balls(p, steps, bits).first; }, tag + ".alpha");
    Real b([p, steps](int bits) { return replay_balls(p, steps, bits).second; }, tag + ".beta");
    return {a, b};
}

Reduction reduce_to_D(const ParamPoint& p, long max_steps, const PrecisionPolicy& policy) {
    require_in_simplex(p, policy);
    using Status = Reduction::Status;
    // Steps are recomputed from scratch at each precision; an undecidable region test at max_bits is a line hit.
    auto attempt = [&](int bits, std::vector<MapKind>& steps) -> std::optional<Status> {
        Ball a = p.alpha.at(bits), b = p.beta.at(bits);
        steps.clear();
        for (;;) {
            int half = (a - Ball(mpq_class(1, 2), bits)).sign_if_certain();
            if (half == 0) return std::nullopt;
            MapKind next;
            if (half > 0) {
                next = MapKind::F;
            } else {
                int diag = (2 * a + b - 1).sign_if_certain();
                if (diag == 0) return std::nullopt;
                if (diag > 0) return Status::Reduced;
                next = MapKind::G;
            }
            if (static_cast<long>(steps.size()) >= max_steps) return Status::StepLimitExceeded;
            std::tie(a, b) = step(next, a, b);
            steps.push_back(next);
        }
    };
    Reduction out;
    std::vector<MapKind> steps;
    for (int bits = policy.initial_bits;; bits = policy.next(bits)) {
        auto status = attempt(bits, steps);
        if (status || bits >= policy.max_bits) {
            out.status = status.value_or(Status::OnRationalLine);
            break;
        }
    }
    out.record = ReductionRecord::from_steps(std::move(steps));
    if (out.status == Status::Reduced) out.point = replay(p, out.record.steps);
    return out;
}

}  // namespace ietlab
