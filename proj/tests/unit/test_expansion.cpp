#include <doctest.h>

#include "ietlab/expansion.hpp"
#include "oracle/rational_oracle.hpp"

#include <random>

using namespace ietlab;

namespace {

ParamPoint rational_point(const mpq_class& a, const mpq_class& b) { return {Real(a), Real(b)}; }

bool same_point(const ParamPoint& p, const mpq_class& a, const mpq_class& b) {
    return p.alpha.exact() && p.beta.exact() && *p.alpha.exact() == a && *p.beta.exact() == b;
}

std::vector<ExpansionTriple> constant_triples(ExpansionTriple t, std::size_t n) { return std::vector<ExpansionTriple>(n, t); }

}  // namespace

TEST_CASE("region_of") {
    CHECK(region_of(ParamPoint::parse("0.4", "0.35")) == Region::InD);
    CHECK(region_of(ParamPoint::parse("0.2", "0.2")) == Region::NeedsG);
    CHECK(region_of(ParamPoint::parse("0.6", "0.2")) == Region::NeedsF);
    CHECK(region_of(ParamPoint::parse("1/3", "1/3")) == Region::OnRationalLine);
    CHECK(region_of(ParamPoint::parse("1/2", "0.3")) == Region::OnRationalLine);
    CHECK(region_of(ParamPoint::parse("1/sqrt(5)", "0.3")) == Region::InD);
    CHECK_THROWS_AS(region_of(ParamPoint::parse("0.7", "0.3")), DomainViolation);
}

TEST_CASE("apply_map on exact rationals") {
    CHECK(same_point(apply_map(MapKind::G, rational_point(mpq_class(1, 2), mpq_class(1, 4))), mpq_class(1, 4), mpq_class(1, 4)));
    CHECK(same_point(apply_map(MapKind::F, rational_point(mpq_class(2, 3), mpq_class(1, 6))), mpq_class(1, 2), mpq_class(1, 4)));
    CHECK(same_point(apply_map(MapKind::FInv, rational_point(mpq_class(1, 2), mpq_class(1, 4))), mpq_class(2, 3), mpq_class(1, 6)));
    CHECK_THROWS_AS(apply_map(MapKind::F, rational_point(mpq_class(1, 3), mpq_class(1, 6))), DomainViolation);
    CHECK_THROWS_AS(apply_map(MapKind::G, rational_point(mpq_class(2, 3), mpq_class(1, 2))), DomainViolation);
}

TEST_CASE("G is an involution and F_inv undoes F") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> num(1, 999);
    for (int i = 0; i < 500; ++i) {
        mpq_class x(num(rng), 1000), y(num(rng), 1000);
        x.canonicalize();
        y.canonicalize();
        if (x + y < 1) {
            ParamPoint p = rational_point(x, y);
            CHECK(same_point(apply_map(MapKind::G, apply_map(MapKind::G, p)), x, y));
        }
        if (x > mpq_class(1, 2) && x + y < 1) {
            ParamPoint p = rational_point(x, y);
            CHECK(same_point(apply_map(MapKind::FInv, apply_map(MapKind::F, p)), x, y));
        }
    }
    // Ball path: the double image stays within twice the input radius of the input.
    ParamPoint irr = ParamPoint::parse("sqrt(2)/5", "sqrt(3)/7");
    ParamPoint back = apply_map(MapKind::G, apply_map(MapKind::G, irr));
    Ball d = back.alpha.at(256) - irr.alpha.at(256);
    CHECK(d.contains(mpq_class(0)));
    CHECK(d.rad_double() < 1e-70);
}

TEST_CASE("inverse map partial derivatives are bounded by one") {
    for (int i = 1; i < 100; ++i)
        for (int j = 1; j < 100; ++j) {
            double x = i / 100.0, y = j / 100.0;
            if (x + y >= 1) continue;
            for (MapKind m : {MapKind::FInv, MapKind::GInv})
                for (double v : inverse_map_jacobian(m, x, y)) CHECK(std::abs(v) <= 1.0);
        }
}

TEST_CASE("reduce_to_D") {
    Reduction r = reduce_to_D(ParamPoint::parse("0.4", "0.35"));
    CHECK(r.status == Reduction::Status::Reduced);
    CHECK(r.record.empty());

    // G(0.2,0.2) = (0.6,0.2) and F(0.6,0.2) = (1/3,1/3), which sits on the line 2a+b = 1.
    PrecisionPolicy policy;
    policy.max_bits = 1024;
    Reduction g = reduce_to_D(ParamPoint::parse("0.2", "0.2"), 10000, policy);
    CHECK(g.status == Reduction::Status::OnRationalLine);
    CHECK(g.record.steps == std::vector<MapKind>{MapKind::G, MapKind::F});
    CHECK(g.record.prefix_s == 1);
    CHECK(same_point(replay(ParamPoint::parse("0.2", "0.2"), {MapKind::G}), mpq_class(3, 5), mpq_class(1, 5)));
    CHECK(same_point(replay(ParamPoint::parse("0.2", "0.2"), g.record.steps), mpq_class(1, 3), mpq_class(1, 3)));

    // A nearby irrational point takes the same first steps and then reaches D.
    Reduction h = reduce_to_D(ParamPoint::parse("0.2", "0.2 + sqrt(2)/1000"));
    REQUIRE(h.status == Reduction::Status::Reduced);
    CHECK(h.record.steps[0] == MapKind::G);
    CHECK(h.record.steps[1] == MapKind::F);
    CHECK(region_of(h.point) == Region::InD);

    Reduction line = reduce_to_D(ParamPoint::parse("1/3", "1/3"));
    CHECK(line.status == Reduction::Status::OnRationalLine);

    Reduction limited = reduce_to_D(ParamPoint::parse("1 - sqrt(2)/1000", "sqrt(2)/2000"), 3);
    CHECK(limited.status == Reduction::Status::StepLimitExceeded);
}

TEST_CASE("reduction record bookkeeping") {
    using M = MapKind;
    ReductionRecord r = ReductionRecord::from_steps({M::G, M::F, M::F, M::G, M::F});
    CHECK(r.prefix_s == 1);
    CHECK(r.suffix_t == 0);
    CHECK(r.f_powers == std::vector<long>{1, 2});
    ReductionRecord only_g = ReductionRecord::from_steps({M::G});
    CHECK(only_g.prefix_s == 1);
    CHECK(only_g.suffix_t == 1);
    CHECK(only_g.f_powers.empty());
}

TEST_CASE("reduction terminates on random rationals off the lines") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> num(1, 9999);
    PrecisionPolicy policy;
    policy.max_bits = 2048;
    int reduced = 0;
    for (int i = 0; i < 60; ++i) {
        mpq_class a(num(rng), 10007), b(num(rng), 10009);
        a.canonicalize();
        b.canonicalize();
        if (a + b >= 1) continue;
        // oracle: exact reduction
        mpq_class x = a, y = b;
        std::vector<MapKind> steps;
        bool line = false;
        while (true) {
            if (x == mpq_class(1, 2) || 2 * x + y == 1) {
                line = true;
                break;
            }
            if (x > mpq_class(1, 2)) {
                steps.push_back(MapKind::F);
                y = y / x;
                x = (2 * x - 1) / x;
            } else if (2 * x + y < 1) {
                steps.push_back(MapKind::G);
                x = 1 - x - y;
            } else {
                break;
            }
        }
        Reduction r = reduce_to_D(rational_point(a, b), 10000, policy);
        if (line) {
            CHECK(r.status == Reduction::Status::OnRationalLine);
        } else {
            REQUIRE(r.status == Reduction::Status::Reduced);
            CHECK(r.record.steps == steps);
            CHECK(same_point(r.point, x, y));
            ++reduced;
        }
    }
    CHECK(reduced > 20);
}

TEST_CASE("expansion of 1/sqrt5, 0.3") {
    ParamPoint p = ParamPoint::parse("1/sqrt(5)", "0.3");
    ExpansionSeq seq = expand_in_D(p, 6);
    REQUIRE(seq.depth() == 6);
    CHECK_FALSE(seq.degeneracy);
    CHECK(seq.triples[0] == ExpansionTriple{2, 1, -1});
    Ball a = p.alpha.at(128), b = p.beta.at(128);
    Ball x0 = (1 - a - b) / (1 - a), y0 = (1 - 2 * a) / (1 - a);
    CHECK(x0.mid_double() == doctest::Approx(0.457296).epsilon(1e-5));
    CHECK(y0.mid_double() == doctest::Approx(0.190983).epsilon(1e-5));
    ExpansionSeq full = full_expansion(p, 6);
    CHECK(full.triples == seq.triples);
    CHECK(full.reduction.empty());
}

TEST_CASE("rational point hits a tie at step 2") {
    PrecisionPolicy policy;
    policy.max_bits = 1024;
    ExpansionSeq seq = expand_in_D(ParamPoint::parse("0.4", "0.35"), 5, policy);
    REQUIRE(seq.degeneracy);
    CHECK(seq.degeneracy->index == 2);
    CHECK(seq.triples.empty());
    auto o = oracle::expand(mpq_class(2, 5), mpq_class(7, 20), 5);
    CHECK(o.degenerate_at == 2u);
}

TEST_CASE("ball expansion agrees with the exact oracle on rationals") {
    std::mt19937_64 rng(23);
    PrecisionPolicy policy;
    policy.max_bits = 2048;
    int checked = 0;
    for (int i = 0; i < 200 && checked < 25; ++i) {
        std::uniform_int_distribution<long> num(1, 1000000);
        mpq_class a(num(rng), 2000003), b(num(rng), 1000033);
        a.canonicalize();
        b.canonicalize();
        ParamPoint p = rational_point(a, b);
        if (a + b >= 1 || region_of(p, policy) != Region::InD) continue;
        auto o = oracle::expand(a, b, 12);
        ExpansionSeq seq = expand_in_D(p, 12, policy);
        REQUIRE(seq.triples.size() == o.triples.size());
        for (std::size_t k = 0; k < o.triples.size(); ++k) {
            CHECK(seq.triples[k].n == o.triples[k].n);
            CHECK(seq.triples[k].m == o.triples[k].m);
            CHECK(seq.triples[k].eps == o.triples[k].eps);
        }
        CHECK(seq.degeneracy.has_value() == o.degenerate_at.has_value());
        if (seq.degeneracy && o.degenerate_at) CHECK(seq.degeneracy->index == *o.degenerate_at);
        ++checked;
    }
    CHECK(checked == 25);
}

TEST_CASE("first sign is -1 everywhere in D") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        double a = 0.5 * u(rng);
        double b = (1 - 2 * a) + u(rng) * a;  // between the lines 2a+b = 1 and a+b = 1
        ParamPoint p = {Real(rational_from_double(a)), Real(rational_from_double(b))};
        if (region_of(p) != Region::InD) continue;
        Ball x0 = (1 - p.alpha.at(128) - p.beta.at(128)) / (1 - p.alpha.at(128));
        Ball y0 = (1 - 2 * p.alpha.at(128)) / (1 - p.alpha.at(128));
        CHECK((x0 + y0 - 1).sign_if_certain() == -1);
    }
}

TEST_CASE("validate_expansion") {
    ValidityReport good = validate_expansion(constant_triples({2, 2, -1}, 10));
    CHECK(good.admissible_so_far);
    CHECK(good.forbidden_n == 0);
    ValidityReport bad = validate_expansion(constant_triples({1, 1, 1}, 10));
    CHECK_FALSE(bad.admissible_so_far);
    CHECK(bad.forbidden_n_frequency == 1.0);
    std::vector<ExpansionTriple> mixed;
    for (int i = 0; i < 10; ++i) mixed.push_back(i % 2 ? ExpansionTriple{1, 1, 1} : ExpansionTriple{3, 2, -1});
    ValidityReport half = validate_expansion(mixed);
    CHECK(half.admissible_so_far);
    CHECK(half.forbidden_n_frequency == 0.5);
    CHECK(half.forbidden_m_frequency == 0.5);
    CHECK_FALSE(validate_expansion({{0, 2, 1}}).digits_ok);
}

TEST_CASE("check_window_condition") {
    auto forty = constant_triples({20, 20, -1}, 12);
    WindowResult r = check_window_condition(forty, 20, 1);
    CHECK(r.holds);
    CHECK(r.holds_from == 1);

    std::vector<ExpansionTriple> alt;
    for (int i = 0; i < 12; ++i) alt.push_back(i % 2 == 0 ? ExpansionTriple{40, 40, 1} : ExpansionTriple{10, 10, -1});
    WindowResult two = check_window_condition(alt, 20, 2);
    CHECK(two.holds);
    CHECK(two.holds_from == 2);
    CHECK_FALSE(check_window_condition(alt, 20, 1).holds);

    WindowResult zero = check_window_condition(alt, 0, 1);
    CHECK(zero.holds);
    CHECK(zero.holds_from == 1);

    // An early failing window pushes k0 past it.
    auto late = forty;
    late[3] = {1, 2, -1};
    WindowResult l = check_window_condition(late, 20, 1);
    CHECK(l.holds);
    CHECK(l.holds_from == 5);
    CHECK(check_window_condition(late, 20, 3).holds_from == 7);
    CHECK_FALSE(check_window_condition(forty, 20, 13).holds);
}

TEST_CASE("point_from_expansion") {
    // constant (2,2,+1): A = (1-a)/(1+b) solves the periodic tail 1/(2 + 1/(2 + sqrt5)) = 1/sqrt5
    ParamPoint p = point_from_expansion(constant_triples({2, 2, 1}, 40));
    Ball a = p.alpha.at(256), b = p.beta.at(256);
    Ball big_a = (1 - a) / (1 + b);
    CHECK(std::abs(big_a.mid_double() - 1 / std::sqrt(5.0)) < 1e-10);
    // constant (2,2,-1): tail [(1,4),(-1,4),...] gives A = 1/(4 - sqrt3)
    ParamPoint q = point_from_expansion(constant_triples({2, 2, -1}, 40));
    Ball qa = q.alpha.at(256), qb = q.beta.at(256);
    CHECK(std::abs(((1 - qa) / (1 + qb)).mid_double() - 1 / (4 - std::sqrt(3.0))) < 1e-10);

    CHECK(region_of(p) == Region::InD);
    ExpansionSeq back = full_expansion(p, 40);
    CHECK(back.triples == constant_triples({2, 2, 1}, 40));

    ParamPoint shallow = point_from_expansion({{3, 5, 1}});
    ExpansionSeq one = full_expansion(shallow, 1);
    REQUIRE(one.depth() == 1);
    CHECK(one.triples[0] == ExpansionTriple{3, 5, 1});

    CHECK_THROWS_AS(point_from_expansion({}), InadmissiblePrefix);
    CHECK_THROWS_AS(point_from_expansion({{0, 1, 1}}), InadmissiblePrefix);
}

TEST_CASE("expansion round trip on random prefixes") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> digit(1, 9);
    for (int trial = 0; trial < 15; ++trial) {
        std::vector<ExpansionTriple> t;
        for (int k = 0; k < 15; ++k) {
            ExpansionTriple x{digit(rng), digit(rng), rng() % 2 ? 1 : -1};
            if (x.n == 1 && x.eps == 1) x.n = 2;
            if (x.m == 1 && x.eps == 1) x.m = 2;
            t.push_back(x);
        }
        ExpansionSeq seq = full_expansion(point_from_expansion(t), t.size());
        CHECK(seq.triples == t);
    }
}
